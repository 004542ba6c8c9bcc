#include "ampec/oracle.hpp"

#include "ampec/bnb.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace ampec {

namespace {

struct Probe {
  const Instance& inst;
  std::size_t count = 0;

  // f(x*(y), y); +inf when the lower-level QP fails so the point is never chosen.
  double operator()(const Vec& y, Vec* x = nullptr) {
    ++count;
    try {
      UpperBound ub = upper_bound_from_y(inst, y);
      if (x) *x = std::move(ub.x);
      return ub.fval;
    } catch (const NonConvergence&) {
      return std::numeric_limits<double>::infinity();
    }
  }
};

// Golden-section search on [a, b] for a unimodal-enough function of one
// coordinate. Returns the best abscissa seen.
template <class F>
double golden_section(F&& fn, double a, double b, double tol, double& best_val) {
  const double invphi = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - invphi * (b - a);
  double d = a + invphi * (b - a);
  double fc = fn(c);
  double fd = fn(d);
  double best_x = fc <= fd ? c : d;
  best_val = std::min(fc, fd);
  while (b - a > tol) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - invphi * (b - a);
      fc = fn(c);
      if (fc < best_val) {
        best_val = fc;
        best_x = c;
      }
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + invphi * (b - a);
      fd = fn(d);
      if (fd < best_val) {
        best_val = fd;
        best_x = d;
      }
    }
  }
  return best_x;
}

}  // namespace

OracleResult grid_solve(const Instance& inst, double step, bool refine,
                        const std::optional<BoxRegion>& region) {
  if (inst.m > kOracleMaxM) {
    throw std::invalid_argument("grid_solve: m = " + std::to_string(inst.m) +
                                " is too large for the grid oracle (max " +
                                std::to_string(kOracleMaxM) + "); use the branch-and-bound solver");
  }
  if (!(step > 0.0)) throw std::invalid_argument("grid_solve: step must be positive");
  const BoxRegion Y = region ? *region : inst.Y;
  if (Y.dim() != inst.m || !Y.valid()) throw std::invalid_argument("grid_solve: bad region");

  const std::size_t m = inst.m;
  std::vector<long> counts(m);
  Vec spacing(static_cast<Eigen::Index>(m));
  OracleResult res;
  for (std::size_t j = 0; j < m; ++j) {
    const auto jj = static_cast<Eigen::Index>(j);
    const double width = Y.hi[jj] - Y.lo[jj];
    const long cells = width > 0.0 ? static_cast<long>(std::ceil(width / step - 1e-12)) : 0;
    counts[j] = cells + 1;
    spacing[jj] = cells > 0 ? width / static_cast<double>(cells) : 0.0;
    res.grid_step = std::max(res.grid_step, spacing[jj]);
  }

  Probe probe{inst};
  auto grid_point = [&](const std::vector<long>& idx) {
    Vec y(static_cast<Eigen::Index>(m));
    for (std::size_t j = 0; j < m; ++j) {
      const auto jj = static_cast<Eigen::Index>(j);
      // The last index lands exactly on the upper bound.
      y[jj] = idx[j] == counts[j] - 1 ? Y.hi[jj] : Y.lo[jj] + static_cast<double>(idx[j]) * spacing[jj];
    }
    return y;
  };

  res.value = std::numeric_limits<double>::infinity();
  std::vector<long> idx(m, 0);
  while (true) {
    const Vec y = grid_point(idx);
    Vec x;
    const double v = probe(y, &x);
    if (v < res.value) {
      res.value = v;
      res.y_best = y;
      res.x_best = std::move(x);
    }
    std::size_t j = 0;
    while (j < m && ++idx[j] == counts[j]) idx[j++] = 0;
    if (j == m) break;
  }

  if (refine && std::isfinite(res.value)) {
    res.refined = true;
    const double tol = step / 100.0;
    for (int sweep = 0; sweep < 20; ++sweep) {
      const double before = res.value;
      for (std::size_t j = 0; j < m; ++j) {
        const auto jj = static_cast<Eigen::Index>(j);
        const double lo = std::max(Y.lo[jj], res.y_best[jj] - spacing[jj]);
        const double hi = std::min(Y.hi[jj], res.y_best[jj] + spacing[jj]);
        if (!(hi - lo > tol)) continue;
        Vec y = res.y_best;
        auto along = [&](double t) {
          y[jj] = t;
          return probe(y);
        };
        double val = 0.0;
        const double t = golden_section(along, lo, hi, tol, val);
        if (val < res.value) {
          y[jj] = t;
          Vec x;
          res.value = probe(y, &x);
          res.y_best = y;
          res.x_best = std::move(x);
        }
      }
      if (!(res.value < before - 1e-12 * (1.0 + std::abs(before)))) break;
    }
  }
  res.evaluations = probe.count;
  return res;
}

}  // namespace ampec
