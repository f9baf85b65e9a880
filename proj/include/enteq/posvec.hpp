#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "enteq/errors.hpp"

namespace enteq {

/// Point of the positive cone of R^k.  All arithmetic is componentwise.
///
/// A value lives either on the open cone (every coordinate > 0) or on the
/// closed cone (every coordinate >= 0); the declaration travels with the
/// value as the `strict` flag.  Coordinates must be finite.
class PosVec {
 public:
  static PosVec strict(std::vector<double> coords) {
    return PosVec(std::move(coords), true);
  }
  static PosVec nonneg(std::vector<double> coords) {
    return PosVec(std::move(coords), false);
  }
  static PosVec zeros(std::size_t k) {
    return PosVec(std::vector<double>(k, 0.0), false);
  }
  static PosVec ones(std::size_t k) {
    return PosVec(std::vector<double>(k, 1.0), true);
  }
  /// k=1 convenience; strict iff v > 0.
  static PosVec scalar(double v) {
    return PosVec(std::vector<double>{v}, v > 0.0);
  }

  std::size_t dim() const noexcept { return coords_.size(); }
  bool is_strict() const noexcept { return strict_; }
  double operator[](std::size_t i) const { return coords_[i]; }
  const std::vector<double>& coords() const noexcept { return coords_; }

  bool is_zero() const noexcept {
    for (double c : coords_)
      if (c != 0.0) return false;
    return true;
  }
  bool all_positive() const noexcept {
    for (double c : coords_)
      if (!(c > 0.0)) return false;
    return true;
  }
  double sum() const noexcept {
    double s = 0.0;
    for (double c : coords_) s += c;
    return s;
  }

  friend bool operator==(const PosVec& a, const PosVec& b) {
    return a.coords_ == b.coords_;
  }

 private:
  PosVec(std::vector<double> coords, bool strict)
      : coords_(std::move(coords)), strict_(strict) {
    for (std::size_t i = 0; i < coords_.size(); ++i) {
      const double c = coords_[i];
      if (!std::isfinite(c))
        throw DomainError("coordinate " + std::to_string(i) + " is not finite");
      if (strict_ ? !(c > 0.0) : c < 0.0)
        throw DomainError("coordinate " + std::to_string(i) + " = " +
                          std::to_string(c) +
                          (strict_ ? " is not strictly positive"
                                   : " is negative"));
    }
  }

  std::vector<double> coords_;
  bool strict_;
};

namespace detail {
inline void require_same_dim(const PosVec& a, const PosVec& b, const char* op) {
  if (a.dim() != b.dim())
    throw DimensionError(std::string(op) + ": dimension mismatch (" +
                         std::to_string(a.dim()) + " vs " +
                         std::to_string(b.dim()) + ")");
}
}  // namespace detail

inline PosVec cw_add(const PosVec& a, const PosVec& b) {
  detail::require_same_dim(a, b, "cw_add");
  std::vector<double> r(a.dim());
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = a[i] + b[i];
  // a sum with one strict operand is strictly positive
  return (a.is_strict() || b.is_strict()) ? PosVec::strict(std::move(r))
                                          : PosVec::nonneg(std::move(r));
}

inline PosVec cw_mul(const PosVec& a, const PosVec& b) {
  detail::require_same_dim(a, b, "cw_mul");
  std::vector<double> r(a.dim());
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = a[i] * b[i];
  return (a.is_strict() && b.is_strict()) ? PosVec::strict(std::move(r))
                                          : PosVec::nonneg(std::move(r));
}

inline PosVec cw_div(const PosVec& a, const PosVec& b) {
  detail::require_same_dim(a, b, "cw_div");
  std::vector<double> r(a.dim());
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (!(b[i] > 0.0))
      throw DomainError("cw_div: divisor coordinate " + std::to_string(i) +
                        " is not strictly positive");
    r[i] = a[i] / b[i];
  }
  return a.is_strict() ? PosVec::strict(std::move(r))
                       : PosVec::nonneg(std::move(r));
}

inline PosVec cw_scale(const PosVec& a, double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda))
    throw DomainError("cw_scale: scale factor must be strictly positive");
  std::vector<double> r(a.dim());
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = a[i] * lambda;
  return a.is_strict() ? PosVec::strict(std::move(r))
                       : PosVec::nonneg(std::move(r));
}

inline bool in_open_unit_cube(const PosVec& x) {
  for (std::size_t i = 0; i < x.dim(); ++i)
    if (!(x[i] > 0.0 && x[i] < 1.0)) return false;
  return true;
}

/// 1 - x for x strictly inside ]0,1[^k.
inline PosVec one_minus(const PosVec& x) {
  if (!in_open_unit_cube(x))
    throw DomainError("one_minus: point is not strictly inside ]0,1[^k");
  std::vector<double> r(x.dim());
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = 1.0 - x[i];
  return PosVec::strict(std::move(r));
}

}  // namespace enteq
