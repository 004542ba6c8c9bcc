#pragma once

#include <array>
#include <cstdint>

namespace ampec {

/// xoshiro256** seeded through SplitMix64.
///
/// The stream is a pure function of the 64-bit seed and uses only integer
/// arithmetic. The floating-point helpers use IEEE basic operations plus
/// sqrt and an in-repo logarithm, so draws are bit-identical on any
/// platform with IEEE-754 doubles and no fused multiply-add contraction.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t next_u64();

  /// Uniform on the open interval (0, 1); 53 bits of resolution.
  double uniform_open();

  /// Uniform on the open interval (lo, hi).
  double uniform(double lo, double hi);

  /// Standard normal via the Marsaglia polar method.
  double normal();

 private:
  std::array<std::uint64_t, 4> s_{};
  bool have_spare_ = false;
  double spare_ = 0.0;
};

/// Natural logarithm built from frexp and a fixed-length atanh series.
/// Deterministic across platforms; accurate to a few ulps for x > 0.
double portable_log(double x);

}  // namespace ampec
