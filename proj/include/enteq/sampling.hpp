#pragma once

#include <array>
#include <cstdint>
#include <utility>
#include <vector>

#include "enteq/errors.hpp"
#include "enteq/posvec.hpp"
#include "enteq/rng.hpp"

namespace enteq {

/// Sampling domains for the verification engines.
///   OpenCube: ]0,1[^k
///   Cone:     componentwise (lo, hi], log-uniformly sampled
///   FeimD:    pairs (x, y) with x, y > 0 and x + y in ]0,1[^k
enum class Region { OpenCube, Cone, FeimD };

/// Deterministic sample stream.  The same spec always produces the same
/// points, regardless of how the index space is chunked across threads.
struct SampleSpec {
  std::size_t k = 1;
  std::size_t count = 100000;
  std::uint64_t seed = 1;
  Region region = Region::Cone;
  double lo = 0.0;   // cone lower bound (exclusive)
  double hi = 10.0;  // cone upper bound (inclusive)
};

namespace sample {

inline PosVec open_cube_point(rng::Stream& st, std::size_t k) {
  std::vector<double> c(k);
  for (auto& v : c) v = st.u01();
  return PosVec::strict(std::move(c));
}

/// Log-uniform in (lo, hi].  A zero lower bound is replaced by hi * 1e-6,
/// which keeps the region predicate exact while spanning six decades.
inline PosVec cone_point(rng::Stream& st, std::size_t k, double lo, double hi) {
  if (!(hi > lo) || !(hi > 0.0))
    throw DomainError("cone sampling: bounds must satisfy 0 <= lo < hi");
  const double lo_eff = lo > 0.0 ? lo : hi * 1e-6;
  std::vector<double> c(k);
  for (auto& v : c) v = st.log_uniform(lo_eff, hi);
  return PosVec::strict(std::move(c));
}

inline PosVec region_point(rng::Stream& st, const SampleSpec& spec) {
  if (spec.region == Region::FeimD)
    throw DomainError("the pair region does not yield single points");
  return spec.region == Region::OpenCube ? open_cube_point(st, spec.k)
                                         : cone_point(st, spec.k, spec.lo,
                                                      spec.hi);
}

/// Draws x uniform in ]0,1[^k, then y uniform in ]0, 1-x[ componentwise.
/// Membership in the domain D (x, y > 0, x + y inside the cube) holds by
/// construction; no rejection.
inline std::pair<PosVec, PosVec> feim_pair(rng::Stream& st, std::size_t k) {
  std::vector<double> xc(k), yc(k);
  for (std::size_t i = 0; i < k; ++i) {
    xc[i] = st.u01();
    yc[i] = st.u01() * (1.0 - xc[i]);
  }
  return {PosVec::strict(std::move(xc)), PosVec::strict(std::move(yc))};
}

inline std::array<PosVec, 3> triple(rng::Stream& st, const SampleSpec& spec) {
  auto one = [&] { return region_point(st, spec); };
  return {one(), one(), one()};
}

/// Scale factor for homogeneity probes, log-uniform in (0, 10].
inline double lambda_scale(rng::Stream& st) {
  return st.log_uniform(1e-5, 10.0);
}

}  // namespace sample
}  // namespace enteq
