#pragma once

#include "ampec/decomposition.hpp"

#include <utility>

namespace ampec {

/// Convex envelope of -h1(y) = -sum_j xi_j y_j^2 over a box R: the sum of
/// the secants l_j(y_j) = slope_j y_j + intercept_j through the edge ends.
struct EnvelopeAffine {
  Vec slopes;
  Vec intercepts;

  double value(const Vec& y) const { return slopes.dot(y) + intercepts.sum(); }
  const Vec& gradient() const { return slopes; }
};

EnvelopeAffine envelope(const Decomposition& dec, const BoxRegion& region);

struct EnvelopeGap {
  std::size_t index = 0;
  double delta = 0.0;
};

/// delta = max_j [-xi_j y_j^2 - l_j(y_j)], ties to the lowest index.
/// Throws std::domain_error if y lies outside the region by more than 1e-9.
EnvelopeGap envelope_gap_index(const Decomposition& dec, const BoxRegion& region, const Vec& y);

/// Splits `region` along coordinate j at `split`: (R-, R+) with the upper,
/// respectively lower, bound of coordinate j replaced. Throws
/// std::invalid_argument when split is outside [lo_j, hi_j].
std::pair<BoxRegion, BoxRegion> bisect(const BoxRegion& region, std::size_t j, double split);

struct SplitChoice {
  std::size_t index = 0;
  double split = 0.0;
  bool adaptive = true;  // false: longest-edge midpoint fallback
};

/// Adaptive rule: split through the relaxation point on the coordinate with
/// the largest envelope gap. When that gap is not positive (or the point
/// sits on the edge's end) the longest edge is halved instead.
SplitChoice choose_split(const Decomposition& dec, const BoxRegion& region, const Vec& y);

}  // namespace ampec
