#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "enteq/errors.hpp"
#include "enteq/posvec.hpp"
#include "enteq/rng.hpp"

namespace enteq {

/// Multiplicative function on the cone: either the zero map or the
/// continuous power family mu(x) = prod_i x_i^{alpha_i}.  Both satisfy
/// mu(xy) = mu(x) mu(y) identically on the open cone; the power family
/// factors coordinatewise into one-dimensional multiplicative functions.
///
/// Evaluation on the closed cone uses the conventions 0^0 = 1 and
/// 0^a = 0 for a > 0; a zero coordinate under a negative exponent is a
/// domain error.
class MultFn {
 public:
  enum class Kind { Zero, Power };

  static MultFn zero_map(std::size_t k) {
    if (k == 0) throw DimensionError("MultFn: dimension must be >= 1");
    return MultFn(Kind::Zero, {}, k);
  }
  static MultFn power(std::vector<double> alpha) {
    const std::size_t k = alpha.size();
    if (k == 0) throw DimensionError("MultFn: empty exponent vector");
    for (double a : alpha)
      if (!std::isfinite(a)) throw DomainError("MultFn: exponent is not finite");
    return MultFn(Kind::Power, std::move(alpha), k);
  }
  /// Constant-one map (all exponents zero).
  static MultFn one(std::size_t k) {
    return power(std::vector<double>(k, 0.0));
  }
  /// Coordinate projection x -> x_j (exponent vector e_j).
  static MultFn coordinate(std::size_t k, std::size_t j) {
    if (j >= k) throw DimensionError("MultFn::coordinate: index out of range");
    std::vector<double> a(k, 0.0);
    a[j] = 1.0;
    return power(std::move(a));
  }

  Kind kind() const noexcept { return kind_; }
  std::size_t dim() const noexcept { return k_; }
  const std::vector<double>& exponents() const { return alpha_; }

  bool is_zero() const noexcept { return kind_ == Kind::Zero; }
  bool is_one() const noexcept {
    if (kind_ != Kind::Power) return false;
    for (double a : alpha_)
      if (a != 0.0) return false;
    return true;
  }
  /// Structural recognition: the zero map and the coordinate maps are the
  /// (continuous) functions that are additive and multiplicative at once.
  bool is_projection() const noexcept {
    if (kind_ == Kind::Zero) return true;
    std::size_t ones = 0;
    for (double a : alpha_) {
      if (a == 1.0)
        ++ones;
      else if (a != 0.0)
        return false;
    }
    return ones == 1;
  }

  double operator()(const PosVec& x) const {
    if (x.dim() != k_)
      throw DimensionError("MultFn: argument dimension " +
                           std::to_string(x.dim()) + ", expected " +
                           std::to_string(k_));
    if (kind_ == Kind::Zero) return 0.0;
    double prod = 1.0;
    bool vanishes = false;
    for (std::size_t i = 0; i < k_; ++i) {
      const double xi = x[i];
      const double ai = alpha_[i];
      if (xi == 0.0) {
        if (ai < 0.0)
          throw DomainError("MultFn: zero coordinate " + std::to_string(i) +
                            " with negative exponent");
        if (ai > 0.0) vanishes = true;  // 0^a = 0 for a > 0; 0^0 contributes 1
      } else {
        prod *= std::pow(xi, ai);
      }
    }
    return vanishes ? 0.0 : prod;
  }

 private:
  MultFn(Kind kind, std::vector<double> alpha, std::size_t k)
      : kind_(kind), alpha_(std::move(alpha)), k_(k) {}

  Kind kind_;
  std::vector<double> alpha_;
  std::size_t k_;
};

/// Logarithmic function on the open cone: l(x) = sum_i c_i ln(x_i), so
/// l(xy) = l(x) + l(y) identically.  Defined only for strictly positive
/// arguments.
class LogFn {
 public:
  explicit LogFn(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) {
    if (coeffs_.empty()) throw DimensionError("LogFn: empty coefficient vector");
    for (double c : coeffs_)
      if (!std::isfinite(c)) throw DomainError("LogFn: coefficient is not finite");
  }

  static LogFn natural(std::size_t k) {
    return LogFn(std::vector<double>(k, 1.0));
  }
  static LogFn zero(std::size_t k) {
    return LogFn(std::vector<double>(k, 0.0));
  }
  /// Coefficients 1/ln(base) in every coordinate, i.e. log_base componentwise.
  static LogFn with_base(std::size_t k, double base) {
    if (!(base > 0.0) || base == 1.0)
      throw DomainError("LogFn: logarithm base must be positive and != 1");
    const double c = 1.0 / std::log(base);
    return LogFn(std::vector<double>(k, c));
  }

  std::size_t dim() const noexcept { return coeffs_.size(); }
  const std::vector<double>& coeffs() const noexcept { return coeffs_; }
  bool is_identically_zero() const noexcept {
    for (double c : coeffs_)
      if (c != 0.0) return false;
    return true;
  }

  double operator()(const PosVec& x) const {
    if (x.dim() != coeffs_.size())
      throw DimensionError("LogFn: argument dimension " +
                           std::to_string(x.dim()) + ", expected " +
                           std::to_string(coeffs_.size()));
    double s = 0.0;
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
      if (!(x[i] > 0.0))
        throw DomainError("LogFn: coordinate " + std::to_string(i) +
                          " is not strictly positive");
      s += coeffs_[i] * std::log(x[i]);
    }
    return s;
  }

 private:
  std::vector<double> coeffs_;
};

// ---------------------------------------------------------------------------
// Seeded identity probes.  Deterministic given the seed; pairs are drawn
// log-uniformly from (1e-5, 10)^k so both small and large magnitudes are
// exercised.

struct PairProbe {
  double max_deviation = 0.0;  // relative for mult, absolute for log
  std::vector<double> worst_x;
  std::vector<double> worst_y;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
};

struct AdditivityProbe {
  bool additive = false;
  double max_deviation = 0.0;  // relative
  std::vector<double> worst_x;  // counterexample pair when !additive
  std::vector<double> worst_y;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
};

namespace detail {
inline std::vector<double> probe_point(rng::Stream& st, std::size_t k) {
  std::vector<double> c(k);
  for (auto& v : c) v = st.log_uniform(1e-5, 10.0);
  return c;
}
}  // namespace detail

/// Max over n sampled pairs of |mu(xy) - mu(x)mu(y)| / (1 + |mu(xy)|).
inline PairProbe mult_property_probe(const MultFn& mu, std::size_t n,
                                     std::uint64_t seed) {
  if (n < 1) throw DomainError("mult_property_probe: need at least one sample");
  PairProbe p;
  p.samples = n;
  p.seed = seed;
  for (std::size_t i = 0; i < n; ++i) {
    rng::Stream st(seed, i);
    auto xc = detail::probe_point(st, mu.dim());
    auto yc = detail::probe_point(st, mu.dim());
    const PosVec x = PosVec::strict(xc), y = PosVec::strict(yc);
    const double lhs = mu(cw_mul(x, y));
    const double dev = std::fabs(lhs - mu(x) * mu(y)) / (1.0 + std::fabs(lhs));
    if (dev > p.max_deviation) {
      p.max_deviation = dev;
      p.worst_x = xc;
      p.worst_y = yc;
    }
  }
  return p;
}

/// Max over n sampled pairs of |l(xy) - l(x) - l(y)| (absolute).
inline PairProbe log_property_probe(const LogFn& l, std::size_t n,
                                    std::uint64_t seed) {
  if (n < 1) throw DomainError("log_property_probe: need at least one sample");
  PairProbe p;
  p.samples = n;
  p.seed = seed;
  for (std::size_t i = 0; i < n; ++i) {
    rng::Stream st(seed, i);
    auto xc = detail::probe_point(st, l.dim());
    auto yc = detail::probe_point(st, l.dim());
    const PosVec x = PosVec::strict(xc), y = PosVec::strict(yc);
    const double dev = std::fabs(l(cw_mul(x, y)) - l(x) - l(y));
    if (dev > p.max_deviation) {
      p.max_deviation = dev;
      p.worst_x = xc;
      p.worst_y = yc;
    }
  }
  return p;
}

/// Probes mu(x+y) = mu(x) + mu(y) on sampled pairs.  A structural
/// projection passes at tolerance; anything else yields a concrete
/// counterexample pair.
inline AdditivityProbe additivity_probe(const MultFn& mu, std::size_t n,
                                        std::uint64_t seed, double rtol = 1e-9) {
  if (n < 1) throw DomainError("additivity_probe: need at least one sample");
  AdditivityProbe p;
  p.samples = n;
  p.seed = seed;
  for (std::size_t i = 0; i < n; ++i) {
    rng::Stream st(seed, i);
    auto xc = detail::probe_point(st, mu.dim());
    auto yc = detail::probe_point(st, mu.dim());
    const PosVec x = PosVec::strict(xc), y = PosVec::strict(yc);
    const double lhs = mu(cw_add(x, y));
    const double dev = std::fabs(lhs - (mu(x) + mu(y))) / (1.0 + std::fabs(lhs));
    if (dev > p.max_deviation) {
      p.max_deviation = dev;
      p.worst_x = xc;
      p.worst_y = yc;
    }
  }
  p.additive = p.max_deviation <= rtol;
  return p;
}

}  // namespace enteq
