#include "ampec/projected_newton.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace ampec {

double projected_gradient_residual(const Vec& v, const Vec& grad, const BoxRegion& box) {
  double r = 0.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double p = std::clamp(v[i] - grad[i], box.lo[i], box.hi[i]);
    r = std::max(r, std::abs(v[i] - p));
  }
  return r;
}

double linearization_lower_bound(double value, const Vec& grad, const Vec& v, const BoxRegion& box) {
  double bound = value;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    bound += std::min(grad[i] * (box.lo[i] - v[i]), grad[i] * (box.hi[i] - v[i]));
  }
  return bound;
}

namespace {

// Solves H_FF d = -g_F, shifting the diagonal if the factorization fails.
bool newton_direction(const Mat& H, const Vec& g, const std::vector<Eigen::Index>& free_idx, Vec& d) {
  const Mat Hff = H(free_idx, free_idx);
  const Vec gf = g(free_idx);
  double shift = 0.0;
  const double scale = std::max(1.0, Hff.diagonal().cwiseAbs().maxCoeff());
  for (int attempt = 0; attempt < 8; ++attempt) {
    Eigen::LLT<Mat> llt(shift > 0.0 ? Mat(Hff + shift * Mat::Identity(Hff.rows(), Hff.cols())) : Hff);
    if (llt.info() == Eigen::Success) {
      const Vec df = -llt.solve(gf);
      if (df.allFinite()) {
        d(free_idx) = df;
        return true;
      }
    }
    shift = shift == 0.0 ? 1e-10 * scale : shift * 100.0;
  }
  return false;
}

}  // namespace

NewtonResult projected_newton(const SmoothFunction& fn, const BoxRegion& box, Vec start,
                              const NewtonOptions& opts) {
  NewtonResult res;
  Vec v = box.project(start);
  SmoothEval cur = fn(v, true);
  ++res.evaluations;
  if (!cur.ok) {
    res.v = std::move(v);
    res.at = std::move(cur);
    res.residual = std::numeric_limits<double>::infinity();
    return res;
  }

  const Eigen::Index N = v.size();
  for (res.iterations = 0;; ++res.iterations) {
    const double r = projected_gradient_residual(v, cur.grad, box);
    res.residual = r;
    if (r <= opts.tol) {
      res.converged = true;
      break;
    }
    if (res.iterations >= opts.max_iter) break;

    const double eps = std::min(opts.active_eps, r);
    std::vector<Eigen::Index> free_idx;
    std::vector<Eigen::Index> held_idx;
    for (Eigen::Index i = 0; i < N; ++i) {
      const bool held = (v[i] <= box.lo[i] + eps && cur.grad[i] > 0.0) ||
                        (v[i] >= box.hi[i] - eps && cur.grad[i] < 0.0);
      (held ? held_idx : free_idx).push_back(i);
    }

    Vec d = Vec::Zero(N);
    bool newton_ok = true;
    if (!free_idx.empty()) newton_ok = newton_direction(cur.hess, cur.grad, free_idx, d);
    if (!newton_ok) {
      for (Eigen::Index i : free_idx) d[i] = -cur.grad[i] / std::max(1.0, std::abs(cur.hess(i, i)));
    }
    for (Eigen::Index i : held_idx) d[i] = -cur.grad[i] / std::max(1e-12, std::abs(cur.hess(i, i)));

    // Armijo along the projection arc.
    double t = 1.0;
    bool accepted = false;
    Vec trial;
    SmoothEval trial_eval;
    const double noise =
        16.0 * std::numeric_limits<double>::epsilon() * (1.0 + std::max(std::abs(cur.value), cur.scale));
    for (int ls = 0; ls < 50; ++ls) {
      trial = box.project(v + t * d);
      double model = 0.0;
      for (Eigen::Index i : free_idx) model += cur.grad[i] * (trial[i] - v[i]);
      for (Eigen::Index i : held_idx) model += cur.grad[i] * (trial[i] - v[i]);
      trial_eval = fn(trial, false);
      ++res.evaluations;
      if (!trial_eval.ok) break;
      if (trial_eval.value <= cur.value + opts.armijo * model) {
        accepted = true;
        break;
      }
      // Within rounding of the current value: take the step if it improves
      // stationarity, otherwise keep backtracking.
      if (trial_eval.value <= cur.value + noise &&
          projected_gradient_residual(trial, trial_eval.grad, box) < r) {
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    if (!accepted) break;
    if ((trial - v).cwiseAbs().maxCoeff() == 0.0) break;
    v = std::move(trial);
    cur = fn(v, true);
    ++res.evaluations;
    if (!cur.ok) break;
  }

  res.v = std::move(v);
  res.at = std::move(cur);
  return res;
}

}  // namespace ampec
