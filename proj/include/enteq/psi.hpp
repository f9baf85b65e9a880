#pragma once

#include <cmath>
#include <memory>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "enteq/dsl.hpp"
#include "enteq/errors.hpp"
#include "enteq/posvec.hpp"

namespace enteq {

/// Scalar function on the open cone, used as the psi term of a solution.
///
/// Builtin kinds evaluate psi(1) exactly; an expression kind is evaluated
/// at the all-ones vector.  For NegXLogX the value is
/// -sum_i s_i log_base(s_i) with natural base by default.
class PsiFn {
 public:
  enum class Kind { Const, Linear, NegXLogX, Expr };

  static PsiFn constant(double c) {
    PsiFn p(Kind::Const);
    p.c_ = c;
    return p;
  }
  static PsiFn linear(std::vector<double> a) {
    if (a.empty()) throw DimensionError("PsiFn::linear: empty coefficients");
    PsiFn p(Kind::Linear);
    p.k_ = a.size();
    p.a_ = std::move(a);
    return p;
  }
  static PsiFn neg_x_log_x(double base = std::numbers::e) {
    if (!(base > 0.0) || base == 1.0)
      throw DomainError("PsiFn: logarithm base must be positive and != 1");
    PsiFn p(Kind::NegXLogX);
    p.base_ = base;
    p.inv_ln_base_ = base == std::numbers::e ? 1.0 : 1.0 / std::log(base);
    return p;
  }
  static PsiFn expression(const std::string& source, std::size_t k) {
    PsiFn p(Kind::Expr);
    p.k_ = k;
    p.source_ = source;
    p.expr_ = std::make_shared<const dsl::Expr>(
        dsl::parse(source, static_cast<int>(k), dsl::VarSet::s_only()));
    return p;
  }

  Kind kind() const noexcept { return kind_; }
  /// Dimension pinned by the parameters, when any (Linear, Expr).
  std::optional<std::size_t> dim() const noexcept { return k_; }
  double const_value() const { return c_; }
  const std::vector<double>& linear_coeffs() const { return a_; }
  double base() const { return base_; }
  const std::string& source() const { return source_; }

  double operator()(const PosVec& s) const {
    if (k_ && *k_ != s.dim())
      throw DimensionError("PsiFn: argument dimension " +
                           std::to_string(s.dim()) + ", expected " +
                           std::to_string(*k_));
    if (!s.all_positive())
      throw DomainError("PsiFn: argument must be strictly positive");
    switch (kind_) {
      case Kind::Const:
        return c_;
      case Kind::Linear: {
        double v = 0.0;
        for (std::size_t i = 0; i < a_.size(); ++i) v += a_[i] * s[i];
        return v;
      }
      case Kind::NegXLogX: {
        double v = 0.0;
        for (std::size_t i = 0; i < s.dim(); ++i)
          v -= s[i] * std::log(s[i]) * inv_ln_base_;
        return v;
      }
      default:
        return dsl::eval(*expr_, dsl::Bindings::bind_s(s.coords()));
    }
  }

  /// psi at the all-ones k-vector.  Exact (no rounding beyond the stored
  /// parameters) for the builtin kinds.
  double value_at_ones(std::size_t k) const {
    switch (kind_) {
      case Kind::Const:
        return c_;
      case Kind::Linear: {
        if (a_.size() != k)
          throw DimensionError("PsiFn: linear coefficients have dimension " +
                               std::to_string(a_.size()) + ", expected " +
                               std::to_string(k));
        double v = 0.0;
        for (double a : a_) v += a;
        return v;
      }
      case Kind::NegXLogX:
        return 0.0;
      default:
        return (*this)(PosVec::ones(k));
    }
  }

 private:
  explicit PsiFn(Kind kind) : kind_(kind) {}

  Kind kind_;
  double c_ = 0.0;
  std::vector<double> a_;
  double base_ = std::numbers::e;
  double inv_ln_base_ = 1.0;
  std::string source_;
  std::shared_ptr<const dsl::Expr> expr_;
  std::optional<std::size_t> k_;
};

}  // namespace enteq
