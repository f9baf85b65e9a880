#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <exception>
#include <functional>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "enteq/families.hpp"
#include "enteq/posvec.hpp"
#include "enteq/rng.hpp"
#include "enteq/sampling.hpp"
#include "enteq/solutions.hpp"

namespace enteq {

/// Residuals are accepted when |r| <= atol + rtol * S, where S is the
/// largest term magnitude met while evaluating the equation.  This keeps
/// large-coordinate cancellation from producing false failures.
struct Tolerances {
  double atol = 1e-9;
  double rtol = 1e-9;
};

struct ResidualReport {
  std::string equation;
  std::size_t samples = 0;
  double max_abs_residual = 0.0;
  double mean_abs_residual = 0.0;
  std::size_t argmax_index = 0;
  std::vector<std::vector<double>> argmax_point;  // one entry per argument
  double tolerance = 0.0;
  bool pass = false;
  std::uint64_t seed = 0;
};

struct Witness {
  std::string claim;
  bool found = false;
  std::vector<std::vector<double>> point;
  double violation = 0.0;
  std::size_t samples_searched = 0;
  std::uint64_t seed = 0;
};

namespace detail {

struct EvalOutcome {
  double residual = 0.0;
  double scale = 0.0;  // largest |term| met during evaluation
};

/// Neumaier-compensated accumulator; fixed reduction order makes means
/// reproducible across execution strategies.
struct CompensatedSum {
  double sum = 0.0;
  double comp = 0.0;
  void add(double v) {
    const double t = sum + v;
    comp += std::fabs(sum) >= std::fabs(v) ? (sum - t) + v : (v - t) + sum;
    sum = t;
  }
  double value() const { return sum + comp; }
};

struct ChunkStats {
  double max_abs = -1.0;
  std::size_t argmax = 0;
  double max_scale = 0.0;
  CompensatedSum abs_sum;
};

// Chunk size is fixed independently of the thread count, and chunks are
// merged in index order, so every statistic (including the compensated
// mean) is bitwise identical for any number of threads.
inline constexpr std::size_t kChunkSize = 4096;

template <class PerIndex>
std::vector<ChunkStats> run_chunks(std::size_t count, int threads,
                                   PerIndex&& per_index) {
  const std::size_t nchunks = (count + kChunkSize - 1) / kChunkSize;
  std::vector<ChunkStats> chunks(nchunks);
  std::exception_ptr error;
  std::mutex error_mutex;

  auto work_chunk = [&](std::size_t c) {
    ChunkStats& st = chunks[c];
    const std::size_t begin = c * kChunkSize;
    const std::size_t end = std::min(count, begin + kChunkSize);
    for (std::size_t i = begin; i < end; ++i) {
      const EvalOutcome out = per_index(i);
      const double a = std::fabs(out.residual);
      st.abs_sum.add(a);
      if (a > st.max_abs) {
        st.max_abs = a;
        st.argmax = i;
      }
      st.max_scale = std::max(st.max_scale, out.scale);
    }
  };

  const int nthreads =
      std::max(1, std::min<int>(threads, static_cast<int>(nchunks)));
  if (nthreads == 1) {
    for (std::size_t c = 0; c < nchunks; ++c) work_chunk(c);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(nthreads));
    for (int t = 0; t < nthreads; ++t) {
      pool.emplace_back([&, t] {
        try {
          for (std::size_t c = static_cast<std::size_t>(t); c < nchunks;
               c += static_cast<std::size_t>(nthreads))
            work_chunk(c);
        } catch (...) {
          const std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      });
    }
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
  }
  return chunks;
}

template <class PerIndex, class PointsAt>
ResidualReport run_samples(std::string equation, const SampleSpec& spec,
                           const Tolerances& tol, int threads,
                           PerIndex&& per_index, PointsAt&& points_at) {
  if (spec.count < 1)
    throw DomainError("verification run: need at least one sample");
  const auto chunks = run_chunks(spec.count, threads, per_index);

  ResidualReport r;
  r.equation = std::move(equation);
  r.samples = spec.count;
  r.seed = spec.seed;
  CompensatedSum total;
  double max_abs = -1.0;
  std::size_t argmax = 0;
  double max_scale = 0.0;
  for (const auto& c : chunks) {
    total.add(c.abs_sum.value());
    if (c.max_abs > max_abs) {  // strict: ties keep the smallest index
      max_abs = c.max_abs;
      argmax = c.argmax;
    }
    max_scale = std::max(max_scale, c.max_scale);
  }
  r.max_abs_residual = max_abs;
  r.mean_abs_residual = total.value() / static_cast<double>(spec.count);
  r.argmax_index = argmax;
  r.argmax_point = points_at(argmax);
  r.tolerance = tol.atol + tol.rtol * max_scale;
  r.pass = r.max_abs_residual <= r.tolerance;
  return r;
}

inline std::vector<std::vector<double>> coords_of(const PosVec& a) {
  return {a.coords()};
}
inline std::vector<std::vector<double>> coords_of(const PosVec& a,
                                                  const PosVec& b) {
  return {a.coords(), b.coords()};
}
inline std::vector<std::vector<double>> coords_of(const PosVec& a,
                                                  const PosVec& b,
                                                  const PosVec& c) {
  return {a.coords(), b.coords(), c.coords()};
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Pointwise residuals.  Each returns lhs - rhs of the corresponding
// equation at one point; the *_outcome variants also report the largest
// term magnitude for the scaled tolerance.

namespace detail {

inline EvalOutcome modified_outcome(const TriSolution& f, const MultFn& mu,
                                    const PosVec& x, const PosVec& y,
                                    const PosVec& z) {
  const std::size_t k = f.dim();
  const PosVec yz = cw_add(y, z);
  const double t1 = f(x, y, z);
  const double t2 = f(x, yz, PosVec::zeros(k));
  const double t3 =
      mu(yz) * f(PosVec::zeros(k), cw_div(y, yz), cw_div(z, yz));
  return {t1 - t2 - t3,
          std::max({std::fabs(t1), std::fabs(t2), std::fabs(t3)})};
}

inline EvalOutcome entropy_classic_outcome(const TriSolution& f, double x,
                                           double y, double z) {
  if (f.dim() != 1)
    throw DimensionError("entropy-classic: requires a k = 1 solution");
  const double t1 = f(PosVec::scalar(x), PosVec::scalar(y), PosVec::scalar(z));
  const double t2 =
      f(PosVec::scalar(x + y), PosVec::scalar(z), PosVec::zeros(1));
  const double t3 = f(PosVec::scalar(x), PosVec::scalar(y), PosVec::zeros(1));
  return {t1 - t2 - t3,
          std::max({std::fabs(t1), std::fabs(t2), std::fabs(t3)})};
}

template <class H>
EvalOutcome feim_outcome(const H& h, const MultFn& mu, const PosVec& x,
                         const PosVec& y) {
  const PosVec sum = cw_add(x, y);
  if (!in_open_unit_cube(x) || !in_open_unit_cube(y) ||
      !in_open_unit_cube(sum))
    throw DomainError("feim: pair outside the domain D");
  const PosVec omx = one_minus(x);
  const PosVec omy = one_minus(y);
  const double t1 = h(x);
  const double t2 = mu(omx) * h(cw_div(y, omx));
  const double t3 = h(y);
  const double t4 = mu(omy) * h(cw_div(x, omy));
  return {t1 + t2 - t3 - t4, std::max({std::fabs(t1), std::fabs(t2),
                                       std::fabs(t3), std::fabs(t4)})};
}

}  // namespace detail

/// f(x,y,z) - f(x, y+z, 0) - mu(y+z) f(0, y/(y+z), z/(y+z)).
inline double residual_modified(const TriSolution& f, const MultFn& mu,
                                const PosVec& x, const PosVec& y,
                                const PosVec& z) {
  return detail::modified_outcome(f, mu, x, y, z).residual;
}

/// f(x,y,z) - f(x+y, z, 0) - f(x, y, 0); k = 1 only.
inline double residual_entropy_classic(const TriSolution& f, double x,
                                       double y, double z) {
  return detail::entropy_classic_outcome(f, x, y, z).residual;
}

/// The mu(t) = t specialization: same evaluation path as residual_modified
/// with the identity exponent.
inline double residual_ent_special(const TriSolution& f, double x, double y,
                                   double z) {
  if (f.dim() != 1)
    throw DimensionError("ent-special: requires a k = 1 solution");
  return residual_modified(f, MultFn::power({1.0}), PosVec::scalar(x),
                           PosVec::scalar(y), PosVec::scalar(z));
}

/// h(x) + mu(1-x) h(y/(1-x)) - h(y) - mu(1-y) h(x/(1-y)) on D.
template <class H>
double residual_feim(const H& h, const MultFn& mu, const PosVec& x,
                     const PosVec& y) {
  return detail::feim_outcome(h, mu, x, y).residual;
}

// ---------------------------------------------------------------------------
// Sampled checks.

inline ResidualReport check_modified(const TriSolution& f, const MultFn& mu,
                                     const SampleSpec& spec,
                                     const Tolerances& tol = {},
                                     int threads = 1) {
  if (f.dim() != spec.k)
    throw DimensionError("check_modified: solution dimension " +
                         std::to_string(f.dim()) + " != sample dimension " +
                         std::to_string(spec.k));
  if (mu.dim() != spec.k)
    throw DimensionError("check_modified: mu dimension mismatch");
  auto point = [&spec](std::size_t i) {
    rng::Stream st(spec.seed, i);
    return sample::triple(st, spec);
  };
  return detail::run_samples(
      "modified", spec, tol, threads,
      [&](std::size_t i) {
        const auto t = point(i);
        return detail::modified_outcome(f, mu, t[0], t[1], t[2]);
      },
      [&](std::size_t i) {
        const auto t = point(i);
        return detail::coords_of(t[0], t[1], t[2]);
      });
}

inline ResidualReport check_entropy_classic(const TriSolution& f,
                                            const SampleSpec& spec,
                                            const Tolerances& tol = {},
                                            int threads = 1) {
  if (f.dim() != 1 || spec.k != 1)
    throw DimensionError("entropy-classic: requires k = 1");
  auto point = [&spec](std::size_t i) {
    rng::Stream st(spec.seed, i);
    return sample::triple(st, spec);
  };
  return detail::run_samples(
      "entropy-classic", spec, tol, threads,
      [&](std::size_t i) {
        const auto t = point(i);
        return detail::entropy_classic_outcome(f, t[0][0], t[1][0], t[2][0]);
      },
      [&](std::size_t i) {
        const auto t = point(i);
        return detail::coords_of(t[0], t[1], t[2]);
      });
}

inline ResidualReport check_ent_special(const TriSolution& f,
                                        const SampleSpec& spec,
                                        const Tolerances& tol = {},
                                        int threads = 1) {
  if (f.dim() != 1 || spec.k != 1)
    throw DimensionError("ent-special: requires k = 1");
  const MultFn id = MultFn::power({1.0});
  auto point = [&spec](std::size_t i) {
    rng::Stream st(spec.seed, i);
    return sample::triple(st, spec);
  };
  auto report = detail::run_samples(
      "ent-special", spec, tol, threads,
      [&](std::size_t i) {
        const auto t = point(i);
        return detail::modified_outcome(f, id, t[0], t[1], t[2]);
      },
      [&](std::size_t i) {
        const auto t = point(i);
        return detail::coords_of(t[0], t[1], t[2]);
      });
  return report;
}

template <class H>
ResidualReport check_feim(const H& h, const MultFn& mu, const SampleSpec& spec,
                          const Tolerances& tol = {}, int threads = 1) {
  if (mu.dim() != spec.k)
    throw DimensionError("check_feim: mu dimension mismatch");
  auto pair_at = [&spec](std::size_t i) {
    rng::Stream st(spec.seed, i);
    return sample::feim_pair(st, spec.k);
  };
  return detail::run_samples(
      "feim", spec, tol, threads,
      [&](std::size_t i) {
        const auto [x, y] = pair_at(i);
        return detail::feim_outcome(h, mu, x, y);
      },
      [&](std::size_t i) {
        const auto [x, y] = pair_at(i);
        return detail::coords_of(x, y);
      });
}

/// Max over the five non-identity permutations of |f(x,y,z) - f(sigma)|.
inline ResidualReport check_symmetry(const TriSolution& f,
                                     const SampleSpec& spec,
                                     const Tolerances& tol = {},
                                     int threads = 1) {
  if (f.dim() != spec.k)
    throw DimensionError("check_symmetry: dimension mismatch");
  auto point = [&spec](std::size_t i) {
    rng::Stream st(spec.seed, i);
    return sample::triple(st, spec);
  };
  return detail::run_samples(
      "symmetry", spec, tol, threads,
      [&](std::size_t i) {
        const auto t = point(i);
        const double base = f(t[0], t[1], t[2]);
        double dev = std::fabs(base - f(t[0], t[2], t[1]));
        dev = std::max(dev, std::fabs(base - f(t[1], t[0], t[2])));
        dev = std::max(dev, std::fabs(base - f(t[1], t[2], t[0])));
        dev = std::max(dev, std::fabs(base - f(t[2], t[0], t[1])));
        dev = std::max(dev, std::fabs(base - f(t[2], t[1], t[0])));
        return detail::EvalOutcome{dev, std::fabs(base)};
      },
      [&](std::size_t i) {
        const auto t = point(i);
        return detail::coords_of(t[0], t[1], t[2]);
      });
}

/// |f(lx, ly, lz) - l^degree f(x, y, z)| for sampled scales l in (0, 10].
/// The scale is appended to the argmax point as a fourth entry.
inline ResidualReport check_homogeneity(const TriSolution& f, int degree,
                                        const SampleSpec& spec,
                                        const Tolerances& tol = {},
                                        int threads = 1) {
  if (f.dim() != spec.k)
    throw DimensionError("check_homogeneity: dimension mismatch");
  auto draw = [&spec](std::size_t i) {
    rng::Stream st(spec.seed, i);
    auto t = sample::triple(st, spec);
    const double lambda = sample::lambda_scale(st);
    return std::make_pair(t, lambda);
  };
  return detail::run_samples(
      "homogeneity", spec, tol, threads,
      [&](std::size_t i) {
        const auto [t, lambda] = draw(i);
        const double scaled = f(cw_scale(t[0], lambda), cw_scale(t[1], lambda),
                                cw_scale(t[2], lambda));
        const double expected =
            std::pow(lambda, static_cast<double>(degree)) * f(t[0], t[1], t[2]);
        return detail::EvalOutcome{
            scaled - expected,
            std::max(std::fabs(scaled), std::fabs(expected))};
      },
      [&](std::size_t i) {
        const auto [t, lambda] = draw(i);
        auto pts = detail::coords_of(t[0], t[1], t[2]);
        pts.push_back({lambda});
        return pts;
      });
}

// ---------------------------------------------------------------------------
// Associativity reduction: a bivariate A satisfying the exchange identity
// A(x, y+z) = A(y, x+z) is a function of the argument sum alone.  The check
// extracts the candidate phi(s) = A(s/2, s/2) and probes both the sum-form
// collapse and the exchange identity.

struct AssocResult {
  bool pass = false;
  ResidualReport sum_form;
  ResidualReport exchange;
  std::function<double(const PosVec&)> phi;
  std::optional<Witness> witness;
};

template <class A>
AssocResult check_associativity(const A& a, const SampleSpec& spec,
                                const Tolerances& tol = {}, int threads = 1) {
  auto phi = [a](const PosVec& s) { return a(cw_scale(s, 0.5), cw_scale(s, 0.5)); };

  auto pair_at = [&spec](std::size_t i) {
    rng::Stream st(spec.seed, i);
    auto u = sample::region_point(st, spec);
    auto v = sample::region_point(st, spec);
    return std::make_pair(u, v);
  };
  ResidualReport sum_form = detail::run_samples(
      "assoc-sum-form", spec, tol, threads,
      [&](std::size_t i) {
        const auto [u, v] = pair_at(i);
        const double lhs = a(u, v);
        const double rhs = phi(cw_add(u, v));
        return detail::EvalOutcome{lhs - rhs,
                                   std::max(std::fabs(lhs), std::fabs(rhs))};
      },
      [&](std::size_t i) {
        const auto [u, v] = pair_at(i);
        return detail::coords_of(u, v);
      });

  auto triple_at = [&spec](std::size_t i) {
    rng::Stream st(spec.seed ^ 0x5bd1e995u, i);
    return sample::triple(st, spec);
  };
  ResidualReport exchange = detail::run_samples(
      "assoc-exchange", spec, tol, threads,
      [&](std::size_t i) {
        const auto t = triple_at(i);
        const double lhs = a(t[0], cw_add(t[1], t[2]));
        const double rhs = a(t[1], cw_add(t[0], t[2]));
        return detail::EvalOutcome{lhs - rhs,
                                   std::max(std::fabs(lhs), std::fabs(rhs))};
      },
      [&](std::size_t i) {
        const auto t = triple_at(i);
        return detail::coords_of(t[0], t[1], t[2]);
      });

  AssocResult result;
  result.pass = sum_form.pass && exchange.pass;
  result.phi = phi;
  if (!result.pass) {
    const ResidualReport& worse =
        sum_form.max_abs_residual >= exchange.max_abs_residual ? sum_form
                                                               : exchange;
    Witness w;
    w.claim = worse.equation;
    w.found = true;
    w.point = worse.argmax_point;
    w.violation = worse.max_abs_residual;
    w.samples_searched = worse.samples;
    w.seed = spec.seed;
    result.witness = w;
  }
  result.sum_form = std::move(sum_form);
  result.exchange = std::move(exchange);
  return result;
}

// ---------------------------------------------------------------------------
// Witness-search oracles.

/// Searches ]0,1[^k for a point with |mu(x) - mu(1-x)| above the gap
/// threshold.  For the constant-one and zero maps the gap vanishes
/// identically and the search reports none; any other power family breaks
/// the symmetry somewhere.
inline Witness oracle_lemma_mult(const MultFn& mu, const SampleSpec& spec,
                                 double gap_threshold = 1e-6) {
  Witness w;
  w.claim = "mult-symmetry";
  w.seed = spec.seed;
  w.samples_searched = spec.count;
  double best = -1.0;
  std::vector<double> best_point;
  for (std::size_t i = 0; i < spec.count; ++i) {
    rng::Stream st(spec.seed, i);
    const PosVec x = sample::open_cube_point(st, spec.k);
    const double gap = std::fabs(mu(x) - mu(one_minus(x)));
    if (gap > best) {
      best = gap;
      best_point = x.coords();
    }
  }
  w.violation = best;
  w.point = {best_point};
  w.found = best > gap_threshold;
  return w;
}

inline Witness oracle_lemma_log(const LogFn& l, const SampleSpec& spec,
                                double gap_threshold = 1e-6) {
  Witness w;
  w.claim = "log-symmetry";
  w.seed = spec.seed;
  w.samples_searched = spec.count;
  double best = -1.0;
  std::vector<double> best_point;
  for (std::size_t i = 0; i < spec.count; ++i) {
    rng::Stream st(spec.seed, i);
    const PosVec x = sample::open_cube_point(st, spec.k);
    const double gap = std::fabs(l(x) - l(one_minus(x)));
    if (gap > best) {
      best = gap;
      best_point = x.coords();
    }
  }
  w.violation = best;
  w.point = {best_point};
  w.found = best > gap_threshold;
  return w;
}

/// Parameters for the normalization oracle; empty fields fall back to the
/// documented defaults (coordinate projection e_0, natural log, all-2
/// exponents for the general case).
struct NormalizationParams {
  std::vector<double> alpha;
  std::vector<double> l_coeffs;
  double b = 1.0;
};

/// Builds the requested case with psi shifted so that psi(1) misses its
/// normalization target by delta, then exhibits the worst sampled triple.
/// The residual there is -mu(y+z) * delta, so any nonzero delta is detected
/// for every case but ZeroMu, which tolerates arbitrary shifts.
inline Witness oracle_normalization(TriSolution::Case which, double delta,
                                    const SampleSpec& spec,
                                    NormalizationParams params = {},
                                    double detection_threshold = 1e-12) {
  const std::size_t k = spec.k;
  std::optional<TriSolution> f;
  std::string label;
  switch (which) {
    case TriSolution::Case::Projection: {
      MultFn mu = params.alpha.empty() ? MultFn::coordinate(k, 0)
                                       : MultFn::power(params.alpha);
      LogFn l = params.l_coeffs.empty() ? LogFn::natural(k)
                                        : LogFn(params.l_coeffs);
      f = TriSolution::unchecked_case_projection(std::move(mu), std::move(l),
                                                 PsiFn::constant(delta));
      label = "normalization-projection";
      break;
    }
    case TriSolution::Case::One:
      f = TriSolution::unchecked_case_one(k, PsiFn::constant(delta));
      label = "normalization-one";
      break;
    case TriSolution::Case::Other: {
      MultFn mu = params.alpha.empty()
                      ? MultFn::power(std::vector<double>(k, 2.0))
                      : MultFn::power(params.alpha);
      f = TriSolution::unchecked_case_other(std::move(mu), params.b,
                                            PsiFn::constant(-params.b + delta));
      label = "normalization-other";
      break;
    }
    case TriSolution::Case::ZeroMu: {
      LogFn l = params.l_coeffs.empty() ? LogFn::natural(k)
                                        : LogFn(params.l_coeffs);
      f = TriSolution::case_zero_mu(std::move(l), PsiFn::constant(delta));
      label = "normalization-zero_mu";
      break;
    }
    default:
      throw ConstraintError(
          "oracle_normalization: case must be one of projection, one, other, "
          "zero_mu");
  }
  const MultFn mu = *f->declared_mu();

  Witness w;
  w.claim = label;
  w.seed = spec.seed;
  w.samples_searched = spec.count;
  double best = -1.0;
  std::vector<std::vector<double>> best_point;
  for (std::size_t i = 0; i < spec.count; ++i) {
    rng::Stream st(spec.seed, i);
    const auto t = sample::triple(st, spec);
    const double r = std::fabs(residual_modified(*f, mu, t[0], t[1], t[2]));
    if (r > best) {
      best = r;
      best_point = detail::coords_of(t[0], t[1], t[2]);
    }
  }
  w.violation = best;
  w.point = std::move(best_point);
  w.found = best > detection_threshold;
  return w;
}

}  // namespace enteq
