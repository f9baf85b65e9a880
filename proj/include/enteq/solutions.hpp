#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <memory>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "enteq/dsl.hpp"
#include "enteq/errors.hpp"
#include "enteq/families.hpp"
#include "enteq/posvec.hpp"
#include "enteq/psi.hpp"

namespace enteq {

namespace detail {

/// Three-way sum that is bitwise invariant under permutation of its
/// arguments: operands are sorted before the fixed-order reduction.
inline double sym_sum3(double a, double b, double c) {
  std::array<double, 3> t{a, b, c};
  std::sort(t.begin(), t.end());
  return (t[0] + t[1]) + t[2];
}

inline PosVec sym_sum3_vec(const PosVec& x, const PosVec& y, const PosVec& z) {
  require_same_dim(x, y, "sum");
  require_same_dim(x, z, "sum");
  std::vector<double> r(x.dim());
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = sym_sum3(x[i], y[i], z[i]);
  return PosVec::nonneg(std::move(r));
}

inline std::string format17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Solution branches of the information equation for h on the open unit
// cube.  Each branch evaluates at points x with x and 1-x strictly inside
// ]0,1[^k.

class HFn {
 public:
  enum class Branch { Projection, One, Other };

  /// h(x) = mu(1-x) l(1-x) + mu(x)(l(x) + c); mu must be a projection.
  static HFn projection_branch(MultFn mu, LogFn l, double c) {
    if (!mu.is_projection())
      throw ConstraintError("HFn::projection_branch: mu is not a projection");
    if (mu.dim() != l.dim())
      throw DimensionError("HFn::projection_branch: mu and l dimensions differ");
    HFn h(Branch::Projection, mu.dim());
    h.mu_ = std::move(mu);
    h.l_ = std::move(l);
    h.c_ = c;
    return h;
  }

  /// h(x) = l(1-x) + c (the mu == 1 branch).
  static HFn one_branch(LogFn l, double c) {
    const std::size_t k = l.dim();
    HFn h(Branch::One, k);
    h.mu_ = MultFn::one(k);
    h.l_ = std::move(l);
    h.c_ = c;
    return h;
  }

  /// h(x) = b mu(1-x) + c mu(x) - b.  Valid for any multiplicative mu.
  static HFn other_branch(MultFn mu, double b, double c) {
    HFn h(Branch::Other, mu.dim());
    h.mu_ = std::move(mu);
    h.b_ = b;
    h.c_ = c;
    return h;
  }

  Branch branch() const noexcept { return branch_; }
  std::size_t dim() const noexcept { return k_; }
  const MultFn& mu() const { return *mu_; }
  const LogFn& l() const {
    if (!l_) throw ConstraintError("this branch carries no log family");
    return *l_;
  }
  double b() const { return b_; }
  double c() const { return c_; }

  /// Whether the parameters satisfy h(x) = h(1-x) identically
  /// (c = 0 / l = 0 / b = c depending on the branch).
  bool symmetric_form() const {
    switch (branch_) {
      case Branch::Projection: return c_ == 0.0 || mu_->is_zero();
      case Branch::One: return l_->is_identically_zero();
      default: return b_ == c_;
    }
  }

  double operator()(const PosVec& x) const {
    if (x.dim() != k_)
      throw DimensionError("HFn: argument dimension " + std::to_string(x.dim()) +
                           ", expected " + std::to_string(k_));
    if (!in_open_unit_cube(x))
      throw DomainError("HFn: point is not strictly inside ]0,1[^k");
    const PosVec omx = one_minus(x);
    switch (branch_) {
      case Branch::Projection:
        return (*mu_)(omx) * (*l_)(omx) + (*mu_)(x) * ((*l_)(x) + c_);
      case Branch::One:
        return (*l_)(omx) + c_;
      default:
        return b_ * (*mu_)(omx) + c_ * (*mu_)(x) - b_;
    }
  }

 private:
  HFn(Branch branch, std::size_t k) : branch_(branch), k_(k) {}

  Branch branch_;
  std::size_t k_;
  std::optional<MultFn> mu_;
  std::optional<LogFn> l_;
  double b_ = 0.0;
  double c_ = 0.0;
};

// ---------------------------------------------------------------------------
// Candidate solutions f(x, y, z) on the cone.
//
// The checked constructors enforce the normalization constraints that make
// the stated form satisfy the equation including its boundary evaluations:
// psi(1) = 0 for the projection case with nonzero mu and for the mu == 1
// case, psi(1) = -b for the remaining case; the mu == 0 case is
// unconstrained.  The `unchecked_*` factories skip the check; the
// normalization oracle uses them to build deliberately violating instances.
//
// Boundary conventions: an argument may be the all-zero vector, in which
// case its mu(t) l(t) / mu(t) term contributes 0 (the 0 log 0 = 0 and
// mu(0) = 0 conventions).  A zero coordinate inside an otherwise positive
// vector is rejected for every case except the k=1 Shannon solution, whose
// closed form absorbs zeros coordinatewise.

class TriSolution {
 public:
  enum class Case { Projection, One, Other, ZeroMu, Shannon, UserExpr };

  static TriSolution case_projection(MultFn mu, LogFn l, PsiFn psi) {
    TriSolution f = unchecked_case_projection(std::move(mu), std::move(l),
                                              std::move(psi));
    if (!f.mu_->is_zero()) f.require_psi1(0.0, "projection case");
    return f;
  }
  static TriSolution case_one(std::size_t k, PsiFn psi) {
    TriSolution f = unchecked_case_one(k, std::move(psi));
    f.require_psi1(0.0, "mu == 1 case");
    return f;
  }
  static TriSolution case_other(MultFn mu, double b, PsiFn psi) {
    TriSolution f = unchecked_case_other(std::move(mu), b, std::move(psi));
    f.require_psi1(-b, "general case");
    return f;
  }
  static TriSolution case_zero_mu(LogFn l, PsiFn psi) {
    TriSolution f(Case::ZeroMu, l.dim());
    f.check_psi_dim(psi);
    f.l_ = std::move(l);
    f.psi_ = std::move(psi);
    return f;
  }
  static TriSolution shannon(double base = std::numbers::e) {
    if (!(base > 0.0) || base == 1.0)
      throw DomainError("shannon: logarithm base must be positive and != 1");
    TriSolution f(Case::Shannon, 1);
    f.base_ = base;
    f.inv_ln_base_ = base == std::numbers::e ? 1.0 : 1.0 / std::log(base);
    return f;
  }
  static TriSolution user_expr(const std::string& source, std::size_t k) {
    TriSolution f(Case::UserExpr, k);
    f.source_ = source;
    f.expr_ = std::make_shared<const dsl::Expr>(
        dsl::parse(source, static_cast<int>(k), dsl::VarSet::xyz()));
    return f;
  }

  static TriSolution unchecked_case_projection(MultFn mu, LogFn l, PsiFn psi) {
    if (!mu.is_projection())
      throw ConstraintError("projection case: mu is not a projection");
    if (mu.dim() != l.dim())
      throw DimensionError("projection case: mu and l dimensions differ");
    TriSolution f(Case::Projection, mu.dim());
    f.check_psi_dim(psi);
    f.mu_ = std::move(mu);
    f.l_ = std::move(l);
    f.psi_ = std::move(psi);
    return f;
  }
  static TriSolution unchecked_case_one(std::size_t k, PsiFn psi) {
    if (k == 0) throw DimensionError("mu == 1 case: dimension must be >= 1");
    TriSolution f(Case::One, k);
    f.check_psi_dim(psi);
    f.psi_ = std::move(psi);
    return f;
  }
  static TriSolution unchecked_case_other(MultFn mu, double b, PsiFn psi) {
    if (mu.is_projection())
      throw ConstraintError("general case: mu must not be a projection");
    if (mu.is_one())
      throw ConstraintError("general case: mu must not be the constant 1");
    TriSolution f(Case::Other, mu.dim());
    f.check_psi_dim(psi);
    f.mu_ = std::move(mu);
    f.b_ = b;
    f.psi_ = std::move(psi);
    return f;
  }

  Case kind() const noexcept { return case_; }
  std::size_t dim() const noexcept { return k_; }
  const MultFn& mu() const {
    if (!mu_) throw ConstraintError("this case carries no mu");
    return *mu_;
  }
  const LogFn& l() const {
    if (!l_) throw ConstraintError("this case carries no log family");
    return *l_;
  }
  const PsiFn& psi() const {
    if (!psi_) throw ConstraintError("this case carries no psi");
    return *psi_;
  }
  double b() const { return b_; }
  double shannon_base() const { return base_; }
  const std::string& source() const { return source_; }

  /// True for every case whose formula is symmetric by construction;
  /// user expressions must be checked numerically.
  bool symmetric_by_construction() const noexcept {
    return case_ != Case::UserExpr;
  }

  /// The multiplicative function this solution solves the equation with.
  /// User expressions carry none; the caller must supply one.
  std::optional<MultFn> declared_mu() const {
    switch (case_) {
      case Case::Projection:
      case Case::Other: return mu_;
      case Case::One: return MultFn::one(k_);
      case Case::ZeroMu: return MultFn::zero_map(k_);
      case Case::Shannon: return MultFn::power({1.0});
      default: return std::nullopt;
    }
  }

  double operator()(const PosVec& x, const PosVec& y, const PosVec& z) const {
    detail::require_same_dim(x, y, "f");
    detail::require_same_dim(x, z, "f");
    if (x.dim() != k_)
      throw DimensionError("f: argument dimension " + std::to_string(x.dim()) +
                           ", expected " + std::to_string(k_));
    if (case_ == Case::Shannon) return eval_shannon(x[0], y[0], z[0]);
    if (case_ == Case::UserExpr)
      return dsl::eval(*expr_, dsl::Bindings::bind_xyz(x.coords(), y.coords(),
                                                       z.coords()));

    check_boundary_pattern(x, "x");
    check_boundary_pattern(y, "y");
    check_boundary_pattern(z, "z");
    const PosVec s = detail::sym_sum3_vec(x, y, z);
    if (!s.all_positive())
      throw DomainError("f: x + y + z must be strictly positive");

    switch (case_) {
      case Case::Projection:
        return detail::sym_sum3(mul_log_term(x), mul_log_term(y),
                                mul_log_term(z)) +
               (*psi_)(s);
      case Case::One:
        return (*psi_)(s);
      case Case::Other:
        return b_ * detail::sym_sum3(mu_term(x), mu_term(y), mu_term(z)) +
               (*psi_)(s);
      default:  // ZeroMu: the mu l terms vanish identically
        return (*psi_)(s);
    }
  }

 private:
  TriSolution(Case c, std::size_t k) : case_(c), k_(k) {}

  void check_psi_dim(const PsiFn& psi) const {
    if (psi.dim() && *psi.dim() != k_)
      throw DimensionError("psi has dimension " + std::to_string(*psi.dim()) +
                           ", expected " + std::to_string(k_));
  }

  // Builtin psi kinds must satisfy the constraint exactly; expression
  // psis within 1e-9.
  void require_psi1(double required, const char* case_name) const {
    const double got = psi_->value_at_ones(k_);
    const bool ok = psi_->kind() == PsiFn::Kind::Expr
                        ? std::fabs(got - required) <= 1e-9
                        : got == required;
    if (!ok)
      throw ConstraintError(std::string(case_name) + ": psi(1) must be " +
                            detail::format17(required) + ", got " +
                            detail::format17(got));
  }

  static void check_boundary_pattern(const PosVec& v, const char* which) {
    if (v.all_positive() || v.is_zero()) return;
    throw DomainError(std::string("f: argument ") + which +
                      " mixes zero and positive coordinates; only strictly "
                      "positive arguments or the all-zero vector are "
                      "evaluable");
  }

  double mul_log_term(const PosVec& t) const {
    return t.is_zero() ? 0.0 : (*mu_)(t) * (*l_)(t);
  }
  double mu_term(const PosVec& t) const {
    return t.is_zero() ? 0.0 : (*mu_)(t);
  }

  double eval_shannon(double x, double y, double z) const {
    const double s = detail::sym_sum3(x, y, z);
    if (!(s > 0.0)) throw DomainError("shannon: x + y + z must be positive");
    const auto xlogx = [this](double t) {
      return t == 0.0 ? 0.0 : t * std::log(t) * inv_ln_base_;
    };
    return detail::sym_sum3(xlogx(x), xlogx(y), xlogx(z)) - xlogx(s);
  }

  Case case_;
  std::size_t k_;
  std::optional<MultFn> mu_;
  std::optional<LogFn> l_;
  std::optional<PsiFn> psi_;
  double b_ = 0.0;
  double base_ = std::numbers::e;
  double inv_ln_base_ = 1.0;
  std::string source_;
  std::shared_ptr<const dsl::Expr> expr_;
};

// ---------------------------------------------------------------------------
// Views used throughout the solution theory: the boundary section
// F(u, v) = f(0, u, v) and its diagonal h(t) = F(1-t, t).

class FView {
 public:
  explicit FView(TriSolution f) : f_(std::move(f)) {}
  std::size_t dim() const noexcept { return f_.dim(); }
  double operator()(const PosVec& u, const PosVec& v) const {
    return f_(PosVec::zeros(f_.dim()), u, v);
  }

 private:
  TriSolution f_;
};

class HView {
 public:
  explicit HView(TriSolution f) : f_(std::move(f)) {}
  std::size_t dim() const noexcept { return f_.dim(); }
  double operator()(const PosVec& t) const {
    if (!in_open_unit_cube(t))
      throw DomainError("h: point is not strictly inside ]0,1[^k");
    return f_(PosVec::zeros(f_.dim()), one_minus(t), t);
  }

 private:
  TriSolution f_;
};

inline FView derive_F(const TriSolution& f) { return FView(f); }
inline HView derive_h(const TriSolution& f) { return HView(f); }

// ---------------------------------------------------------------------------

/// phi(x) = x l(x) on the positive half line; satisfies the product rule
/// phi(xy) = x phi(y) + y phi(x).
class PhiFn {
 public:
  explicit PhiFn(LogFn l) : l_(std::move(l)) {
    if (l_.dim() != 1) throw DimensionError("PhiFn: requires k = 1");
  }
  double operator()(double x) const { return x * l_(PosVec::scalar(x)); }

 private:
  LogFn l_;
};

inline PhiFn phi_from_l(const LogFn& l) { return PhiFn(l); }

/// The k=1 shape lambda -> -lambda log_base(lambda) + lambda * psi1_at_1.
/// With psi1_at_1 = 0 this is exactly the NegXLogX family.
inline PsiFn psi_homogeneity_form(double psi1_at_1,
                                  double base = std::numbers::e) {
  if (psi1_at_1 == 0.0) return PsiFn::neg_x_log_x(base);
  const double inv_ln_base =
      base == std::numbers::e ? 1.0 : 1.0 / std::log(base);
  std::string src = "0 - s[0]*ln(s[0])*(" + detail::format17(inv_ln_base) +
                    ") + s[0]*(" + detail::format17(psi1_at_1) + ")";
  return PsiFn::expression(src, 1);
}

}  // namespace enteq
