#pragma once

#include <stdexcept>
#include <string>

namespace enteq {

/// Vector dimensions disagree, or an operation was asked for an
/// incompatible dimension (e.g. a k=2 solution fed to a k=1 equation).
class DimensionError : public std::invalid_argument {
 public:
  explicit DimensionError(const std::string& msg) : std::invalid_argument(msg) {}
};

/// An evaluation left the domain of a function: log of a nonpositive
/// value, 0 raised to a negative power, division by zero, a point
/// outside the open unit cube, a boundary pattern not covered by the
/// evaluation conventions.
class DomainError : public std::domain_error {
 public:
  explicit DomainError(const std::string& msg) : std::domain_error(msg) {}
};

/// Solution parameters violate the normalization constraint of the
/// requested case, or a family parameter is structurally wrong for it.
class ConstraintError : public std::invalid_argument {
 public:
  explicit ConstraintError(const std::string& msg) : std::invalid_argument(msg) {}
};

/// Expression-language parse failure; carries the source position.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& msg, int line, int column)
      : std::runtime_error(msg + " (line " + std::to_string(line) + ", column " +
                           std::to_string(column) + ")"),
        line_(line),
        column_(column) {}

  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

 private:
  int line_;
  int column_;
};

}  // namespace enteq
