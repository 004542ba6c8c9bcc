#include "ampec/box_region.hpp"

#include <cmath>

namespace ampec {

BoxRegion::BoxRegion(Vec lower, Vec upper) : lo(std::move(lower)), hi(std::move(upper)) {}

BoxRegion BoxRegion::uniform(std::size_t dim, double lo, double hi) {
  const auto d = static_cast<Eigen::Index>(dim);
  return BoxRegion(Vec::Constant(d, lo), Vec::Constant(d, hi));
}

bool BoxRegion::valid() const {
  if (lo.size() != hi.size()) return false;
  for (Eigen::Index i = 0; i < lo.size(); ++i) {
    if (!std::isfinite(lo[i]) || !std::isfinite(hi[i]) || lo[i] > hi[i]) return false;
  }
  return true;
}

bool BoxRegion::contains(const Vec& v, double slack) const {
  if (v.size() != lo.size()) return false;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (!(v[i] >= lo[i] - slack && v[i] <= hi[i] + slack)) return false;
  }
  return true;
}

Vec BoxRegion::project(const Vec& v) const { return v.cwiseMax(lo).cwiseMin(hi); }

double BoxRegion::volume() const {
  double vol = 1.0;
  for (Eigen::Index i = 0; i < lo.size(); ++i) vol *= hi[i] - lo[i];
  return vol;
}

bool BoxRegion::operator==(const BoxRegion& other) const {
  return lo.size() == other.lo.size() && lo == other.lo && hi == other.hi;
}

}  // namespace ampec
