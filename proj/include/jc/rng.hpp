#pragma once

#include <cmath>
#include <cstdint>

namespace jc {

/// Deterministic pseudo-random stream (splitmix64 core).
///
/// std::normal_distribution is implementation-defined; reports must be
/// byte-identical for a given seed, so the generator and the normal
/// transform are pinned here.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform in [0,1) with 53 random bits.
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double a, double b) { return a + (b - a) * uniform01(); }

  /// Standard normal via Box-Muller (caches the spare deviate).
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = uniform01();
    double u2 = uniform01();
    while (u1 <= 1e-300) u1 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double t = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(t);
    has_spare_ = true;
    return r * std::cos(t);
  }

  /// Uniform integer in [0, n).
  int below(int n) { return static_cast<int>(next_u64() % static_cast<std::uint64_t>(n)); }

  /// Derives an independent stream for substream `k` (stable across calls).
  static std::uint64_t derive(std::uint64_t seed, std::uint64_t k) {
    Rng r(seed ^ (0x9e3779b97f4a7c15ULL * (k + 1)));
    return r.next_u64();
  }

 private:
  std::uint64_t state_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace jc
