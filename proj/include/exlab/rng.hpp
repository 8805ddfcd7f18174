#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace exlab {

/// Identity string recorded in run manifests. mt19937_64 has a fully
/// specified output sequence, and the bounded/unit samplers below avoid
/// std::uniform_*_distribution, whose output is implementation-defined.
inline constexpr const char* kGeneratorId = "mt19937_64/threshold-rejection/unit53";

/// Seedable 64-bit generator with portable derived samplers.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform integer in [0, k). Rejection below 2^64 mod k keeps it unbiased.
  std::uint64_t uniform_below(std::uint64_t k) {
    const std::uint64_t threshold = (~k + 1) % k;
    for (;;) {
      const std::uint64_t r = engine_();
      if (r >= threshold) return r % k;
    }
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Standard exponential via inversion (strictly positive argument to log).
  double exponential() { return -std::log(1.0 - unit()); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace exlab
