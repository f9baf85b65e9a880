#pragma once

#include <cmath>
#include <cstdint>

namespace enteq::rng {

/// splitmix64 finalizer; a fixed, documented mixing function.  Changing it
/// would silently invalidate every seeded result, so it never changes.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Deterministic stream of doubles addressed by (seed, index).  Each sample
/// index owns an independent stream, so points can be generated in any order
/// (or in parallel) and still reproduce the serial sequence bit for bit.
class Stream {
 public:
  Stream(std::uint64_t seed, std::uint64_t index)
      : state_(mix64(seed + mix64(index + 1))) {}

  std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform draw from the open interval (0, 1).
  double u01() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  /// Uniform draw from (lo, hi), 0 < lo < hi.
  double uniform(double lo, double hi) { return lo + u01() * (hi - lo); }

  /// Log-uniform draw from (lo, hi), 0 < lo < hi.
  double log_uniform(double lo, double hi) {
    const double llo = std::log(lo);
    return std::exp(llo + u01() * (std::log(hi) - llo));
  }

 private:
  std::uint64_t state_;
};

}  // namespace enteq::rng
