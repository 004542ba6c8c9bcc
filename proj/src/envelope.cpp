#include "ampec/envelope.hpp"

#include <stdexcept>

namespace ampec {

EnvelopeAffine envelope(const Decomposition& dec, const BoxRegion& region) {
  const double xi = dec.xi();
  EnvelopeAffine env;
  env.slopes = -xi * (region.lo + region.hi);
  env.intercepts = xi * region.lo.cwiseProduct(region.hi);
  return env;
}

EnvelopeGap envelope_gap_index(const Decomposition& dec, const BoxRegion& region, const Vec& y) {
  if (!region.contains(y, 1e-9)) {
    throw std::domain_error("envelope_gap_index: point lies outside the region");
  }
  const double xi = dec.xi();
  EnvelopeGap best;
  best.delta = -1.0;
  for (Eigen::Index j = 0; j < y.size(); ++j) {
    // -xi y^2 - secant(y) = xi (y - a)(b - y)
    const double gap = xi * (y[j] - region.lo[j]) * (region.hi[j] - y[j]);
    if (gap > best.delta) {
      best.delta = gap;
      best.index = static_cast<std::size_t>(j);
    }
  }
  if (best.delta < 0.0) best.delta = 0.0;
  return best;
}

std::pair<BoxRegion, BoxRegion> bisect(const BoxRegion& region, std::size_t j, double split) {
  const auto jj = static_cast<Eigen::Index>(j);
  if (jj >= static_cast<Eigen::Index>(region.dim())) {
    throw std::invalid_argument("bisect: coordinate index out of range");
  }
  if (!(split >= region.lo[jj] && split <= region.hi[jj])) {
    throw std::invalid_argument("bisect: split point outside the edge");
  }
  BoxRegion lower = region;
  BoxRegion upper = region;
  lower.hi[jj] = split;
  upper.lo[jj] = split;
  return {std::move(lower), std::move(upper)};
}

SplitChoice choose_split(const Decomposition& dec, const BoxRegion& region, const Vec& y) {
  const Vec yc = region.project(y);
  const EnvelopeGap gap = envelope_gap_index(dec, region, yc);
  const auto j = static_cast<Eigen::Index>(gap.index);
  if (gap.delta > 0.0 && yc[j] > region.lo[j] && yc[j] < region.hi[j]) {
    return {gap.index, yc[j], true};
  }
  Eigen::Index longest = 0;
  region.widths().maxCoeff(&longest);
  return {static_cast<std::size_t>(longest), 0.5 * (region.lo[longest] + region.hi[longest]), false};
}

}  // namespace ampec
