#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "enteq/errors.hpp"
#include "enteq/posvec.hpp"
#include "enteq/solutions.hpp"

namespace enteq {

/// Result of fitting a k=1 black-box solution to the known branches.
/// `kind` is "projection", "one", "zero_mu", "other" or "unclassified";
/// an ambiguous fit is reported as unclassified, never guessed.
struct Classification {
  std::string kind = "unclassified";
  std::optional<double> alpha;
  std::optional<double> b;
  std::optional<double> log_coeff;  // natural-log coefficient of l
  std::optional<double> base;       // exp(1/log_coeff) when defined
  std::optional<double> h_constant;
  double fit_residual = 0.0;
  std::string note;
};

struct ClassifyOptions {
  std::size_t grid = 65;          // h sample count on ]0,1[
  int lambda_min_exp = -8;        // scale sweep 2^min .. 2^max
  int lambda_max_exp = 8;
  double const_tol = 1e-10;       // h constancy threshold
  double fit_tol = 1e-8;          // branch confirmation threshold
  double alpha_one_tol = 1e-6;    // |alpha - 1| below this means projection
};

/// Classifies a k=1 solution by sampling h(t) = f(0, 1-t, t) and the scaled
/// boundary differences W(l) = f(0, 0.2l, 0.8l) - f(0, 0.5l, 0.5l).  For
/// every non-constant branch W(l) = C l^alpha exactly, so a log-log
/// regression recovers alpha; the h grid then confirms the branch shape and
/// pins the remaining parameter.
inline Classification classify(const TriSolution& f,
                               const ClassifyOptions& opt = {}) {
  if (f.dim() != 1)
    throw DimensionError("classify: only k = 1 solutions are supported");
  if (opt.grid < 3) throw ConstraintError("classify: grid too small");

  const PosVec zero = PosVec::zeros(1);
  auto h = [&](double t) {
    return f(zero, PosVec::scalar(1.0 - t), PosVec::scalar(t));
  };

  const std::size_t m = opt.grid | 1u;  // odd, so t = 1/2 is on the grid
  std::vector<double> ts(m), hs(m);
  double hmin = 0.0, hmax = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    ts[j] = static_cast<double>(j + 1) / static_cast<double>(m + 1);
    hs[j] = h(ts[j]);
    if (j == 0) {
      hmin = hmax = hs[j];
    } else {
      hmin = std::min(hmin, hs[j]);
      hmax = std::max(hmax, hs[j]);
    }
  }
  const double h_half = hs[(m - 1) / 2];  // t = 1/2

  Classification out;

  const double spread = hmax - hmin;
  if (spread <= opt.const_tol * (1.0 + std::max(std::fabs(hmax),
                                                std::fabs(hmin)))) {
    out.fit_residual = spread;
    out.h_constant = h_half;
    if (std::fabs(h_half) <= opt.const_tol) {
      out.kind = "one";
      out.note =
          "h is identically 0; also consistent with the mu == 0 case with "
          "Psi(1) = 0, which has the same solution form";
    } else {
      out.kind = "zero_mu";
    }
    return out;
  }

  // Scale sweep.  W(l) = C l^alpha for both non-constant branches.
  const int nl = opt.lambda_max_exp - opt.lambda_min_exp + 1;
  if (nl < 2) throw ConstraintError("classify: need at least two scales");
  std::vector<double> lx(static_cast<std::size_t>(nl)),
      ly(static_cast<std::size_t>(nl));
  double w_sign = 0.0;
  for (int j = 0; j < nl; ++j) {
    const double lambda = std::ldexp(1.0, opt.lambda_min_exp + j);
    const double w = f(zero, PosVec::scalar(0.2 * lambda),
                       PosVec::scalar(0.8 * lambda)) -
                     f(zero, PosVec::scalar(0.5 * lambda),
                       PosVec::scalar(0.5 * lambda));
    if (w == 0.0) {
      out.note = "degenerate scale sweep (W vanished)";
      return out;
    }
    const double sgn = w > 0.0 ? 1.0 : -1.0;
    if (w_sign == 0.0) w_sign = sgn;
    if (sgn != w_sign) {
      out.note = "scale sweep changes sign; no power-law branch fits";
      return out;
    }
    lx[static_cast<std::size_t>(j)] = std::log(lambda);
    ly[static_cast<std::size_t>(j)] = std::log(std::fabs(w));
  }
  // least-squares slope of ln|W| against ln(lambda)
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (int j = 0; j < nl; ++j) {
    const auto u = static_cast<std::size_t>(j);
    sx += lx[u];
    sy += ly[u];
    sxx += lx[u] * lx[u];
    sxy += lx[u] * ly[u];
  }
  const double n = static_cast<double>(nl);
  const double alpha = (n * sxy - sx * sy) / (n * sxx - sx * sx);

  if (std::fabs(alpha - 1.0) <= opt.alpha_one_tol) {
    // projection branch: h(t) = c (t ln t + (1-t) ln(1-t)), c = h(1/2)/ln(1/2)
    const double c = h_half / std::log(0.5);
    double fit = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      const double t = ts[j];
      const double model = c * (t * std::log(t) + (1.0 - t) * std::log(1.0 - t));
      fit = std::max(fit, std::fabs(hs[j] - model));
    }
    out.fit_residual = fit;
    if (fit > opt.fit_tol * (1.0 + std::fabs(c))) {
      out.note = "alpha is 1 but h does not match the projection shape";
      return out;
    }
    out.kind = "projection";
    out.alpha = alpha;
    out.log_coeff = c;
    if (c != 0.0) out.base = std::exp(1.0 / c);
    return out;
  }

  // remaining branch: h(t) = b (t^alpha + (1-t)^alpha - 1)
  const double denom = std::pow(2.0, 1.0 - alpha) - 1.0;
  if (denom == 0.0) {
    out.note = "degenerate exponent in branch fit";
    return out;
  }
  const double b = h_half / denom;
  double fit = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    const double t = ts[j];
    const double model =
        b * (std::pow(t, alpha) + std::pow(1.0 - t, alpha) - 1.0);
    fit = std::max(fit, std::fabs(hs[j] - model));
  }
  out.fit_residual = fit;
  if (fit > opt.fit_tol * (1.0 + std::fabs(b))) {
    out.note = "no solution branch fits the sampled h";
    return out;
  }
  out.kind = "other";
  out.alpha = alpha;
  out.b = b;
  return out;
}

}  // namespace enteq
