#pragma once

#include <cmath>
#include <cstdint>

namespace specgap {

/**
 * Counter-based 64-bit generator (SplitMix64 finalizer). Cheap to seed, no
 * warm-up, and trivially splittable: derive(seed, k) gives an independent
 * stream for trial k, so Monte Carlo runs stay reproducible under any
 * parallel schedule. Every experiment records the master seed in its output.
 */
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// uniform in [0,1), 53 random bits
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// uniform integer in [0, n), rejection sampled (no modulo bias)
  std::uint64_t next_below(std::uint64_t n) {
    if (n <= 1) return 0;
    const int lz = __builtin_clzll(n - 1);
    const std::uint64_t mask = ~0ULL >> lz;
    std::uint64_t r;
    do {
      r = next_u64() & mask;
    } while (r >= n);
    return r;
  }

  /// standard normal via Box-Muller (pair cached)
  double next_normal() {
    if (has_cached_) {
      has_cached_ = false;
      return cached_;
    }
    const double u1 = 1.0 - next_double();  // (0,1]
    const double u2 = next_double();
    const double rad = std::sqrt(-2.0 * std::log(u1));
    const double ang = 6.283185307179586476925286766559 * u2;
    cached_ = rad * std::sin(ang);
    has_cached_ = true;
    return rad * std::cos(ang);
  }

  /// independent stream for a numbered trial
  static std::uint64_t derive(std::uint64_t seed, std::uint64_t stream) {
    SplitMix64 g(seed ^ (0x9e3779b97f4a7c15ULL * (stream + 1)));
    return g.next_u64();
  }

 private:
  std::uint64_t state_;
  double cached_ = 0.0;
  bool has_cached_ = false;
};

}  // namespace specgap
