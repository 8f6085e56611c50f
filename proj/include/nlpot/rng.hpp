#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace nlpot {

/// Seeded random source with portable draw semantics. std::mt19937_64 output
/// is fully specified by the standard, and the uniform mappings below avoid
/// the implementation-defined std::*_distribution, so a given seed produces
/// the same stream on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t next_u64() { return eng_(); }

  /// Uniform in [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  double uniform(double a, double b) { return a + (b - a) * uniform01(); }

  /// Log-uniform over [a, b], both positive.
  double log_uniform(double a, double b) {
    return std::exp(uniform(std::log(a), std::log(b)));
  }

  /// Uniform integer in [0, m).
  std::uint64_t below(std::uint64_t m) { return eng_() % m; }

  bool chance(double prob) { return uniform01() < prob; }

 private:
  std::mt19937_64 eng_;
};

} // namespace nlpot
