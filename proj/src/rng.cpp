#include "ampec/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace ampec {

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t rotl(std::uint64_t x, int k) {
  return (x << k) | (x >> (64 - k));
}

}  // namespace

Rng::Rng(std::uint64_t seed) {
  std::uint64_t sm = seed;
  for (auto& word : s_) word = splitmix64(sm);
}

std::uint64_t Rng::next_u64() {
  const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

double Rng::uniform_open() {
  // Midpoint of one of 2^53 equal cells, so never 0 and never 1.
  const double cell = static_cast<double>(next_u64() >> 11);
  return (cell + 0.5) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) {
  return lo + (hi - lo) * uniform_open();
}

double Rng::normal() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  double u = 0.0;
  double v = 0.0;
  double s = 0.0;
  do {
    u = 2.0 * uniform_open() - 1.0;
    v = 2.0 * uniform_open() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double factor = std::sqrt(-2.0 * portable_log(s) / s);
  spare_ = v * factor;
  have_spare_ = true;
  return u * factor;
}

double portable_log(double x) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw std::domain_error("portable_log: argument must be positive and finite");
  }
  int exponent = 0;
  double mantissa = std::frexp(x, &exponent);  // mantissa in [0.5, 1)
  if (mantissa < 0.70710678118654752440) {
    mantissa *= 2.0;
    exponent -= 1;
  }
  const double s = (mantissa - 1.0) / (mantissa + 1.0);
  const double s2 = s * s;
  // 2 * atanh(s) = 2 * sum s^(2k+1) / (2k+1); |s| <= 0.1716 so 13 terms
  // push the truncation error well below one ulp.
  double term = s;
  double series = 0.0;
  for (int k = 0; k < 13; ++k) {
    series += term / static_cast<double>(2 * k + 1);
    term *= s2;
  }
  constexpr double kLn2Hi = 6.93147180369123816490e-01;
  constexpr double kLn2Lo = 1.90821492927058770002e-10;
  const double e = static_cast<double>(exponent);
  return e * kLn2Hi + (2.0 * series + e * kLn2Lo);
}

}  // namespace ampec
