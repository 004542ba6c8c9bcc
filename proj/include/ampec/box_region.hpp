#pragma once

#include <Eigen/Dense>

#include <cstddef>

namespace ampec {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Axis-aligned box {v : lo <= v <= hi}.
struct BoxRegion {
  Vec lo;
  Vec hi;

  BoxRegion() = default;
  BoxRegion(Vec lower, Vec upper);

  /// The box [lo, hi]^dim.
  static BoxRegion uniform(std::size_t dim, double lo, double hi);

  std::size_t dim() const { return static_cast<std::size_t>(lo.size()); }

  /// Finite bounds, matching sizes and lo <= hi.
  bool valid() const;

  bool contains(const Vec& v, double slack = 0.0) const;

  /// Closest point of the box (coordinatewise clamp).
  Vec project(const Vec& v) const;

  Vec center() const { return 0.5 * (lo + hi); }

  Vec widths() const { return hi - lo; }

  /// Product of edge lengths.
  double volume() const;

  bool operator==(const BoxRegion& other) const;
};

}  // namespace ampec
