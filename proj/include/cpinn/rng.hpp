#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace cpinn {

/// Counter-based generator built on the SplitMix64 finalizer.
///
/// Draw n of stream `seed` is mix(key + (n + 1) * 0x9E3779B97F4A7C15) with
/// key = mix(seed) and
///   mix(z): z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
///           z = (z ^ (z >> 27)) * 0x94D049BB133111EB
///           z ^ (z >> 31)
/// Any draw can be recomputed from (seed, n) alone.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed) : key_(mix(seed)) {}

  static constexpr std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  std::uint64_t bits(std::uint64_t n) const { return mix(key_ + (n + 1) * 0x9E3779B97F4A7C15ULL); }

  /// Uniform in (0, 1]: ((bits >> 11) + 1) * 2^-53.
  double uniform(std::uint64_t n) const {
    return static_cast<double>((bits(n) >> 11) + 1) * 0x1.0p-53;
  }

  /// Standard normal number i, by Box-Muller on uniforms 2i and 2i+1 (cosine branch).
  double normal(std::uint64_t i) const {
    const double u1 = uniform(2 * i);
    const double u2 = uniform(2 * i + 1);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  std::uint64_t key_;
};

}  // namespace cpinn
