#include "ampec/qp_box.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace ampec {

namespace {

double quad_value(const Vec& v, const Vec& Hv, const Vec& c) { return 0.5 * v.dot(Hv) + c.dot(v); }

double projected_residual(const Vec& v, const Vec& grad, const BoxRegion& box) {
  double r = 0.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double p = std::clamp(v[i] - grad[i], box.lo[i], box.hi[i]);
    r = std::max(r, std::abs(v[i] - p));
  }
  return r;
}

// Exact minimizer over the guessed free set with the remaining coordinates
// frozen at their bounds, clamped back into the box. Returns false when
// there is nothing to solve or the reduced matrix is not PD.
bool subspace_candidate(const Mat& H, const Vec& c, const BoxRegion& box, const Vec& v,
                        const Vec& grad, Vec& out) {
  std::vector<Eigen::Index> free_idx;
  std::vector<Eigen::Index> bound_idx;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const bool at_lo = v[i] <= box.lo[i];
    const bool at_hi = v[i] >= box.hi[i];
    const bool stays = (at_lo && grad[i] >= 0.0) || (at_hi && grad[i] <= 0.0);
    (stays ? bound_idx : free_idx).push_back(i);
  }
  if (free_idx.empty()) return false;
  const Mat Hff = H(free_idx, free_idx);
  Vec rhs = -c(free_idx);
  if (!bound_idx.empty()) rhs -= H(free_idx, bound_idx) * v(bound_idx);
  Eigen::LLT<Mat> llt(Hff);
  if (llt.info() != Eigen::Success) return false;
  const Vec u = llt.solve(rhs);
  if (!u.allFinite()) return false;
  out = v;
  out(free_idx) = u;
  out = box.project(out);
  return true;
}

}  // namespace

double lipschitz_estimate(const Mat& H, int iters, double rel_tol) {
  const Eigen::Index d = H.rows();
  if (d == 0) return 1.0;
  const double gershgorin = H.cwiseAbs().rowwise().sum().maxCoeff();
  if (gershgorin == 0.0) return 1.0;
  Vec v(d);
  for (Eigen::Index i = 0; i < d; ++i) v[i] = 1.0 + 0.01 * static_cast<double>(i % 7);
  v.normalize();
  double rq = 0.0;
  for (int it = 0; it < iters; ++it) {
    Vec w = H * v;
    const double next = v.dot(w);
    const double nw = w.norm();
    if (nw == 0.0) break;
    v = w / nw;
    const bool done = std::abs(next - rq) <= rel_tol * std::abs(next);
    rq = next;
    if (done) break;
  }
  return std::min(gershgorin, std::max(1.02 * rq, 1e-300));
}

double kkt_residual(const Mat& H, const Vec& c, const BoxRegion& box, const Vec& v) {
  return projected_residual(v, H * v + c, box);
}

QpSolution solve_box_qp(const Mat& H, const Vec& c, const BoxRegion& box, const QpOptions& opts) {
  return solve_box_qp(H, c, box, opts, box.center());
}

QpSolution solve_box_qp(const Mat& H, const Vec& c, const BoxRegion& box, const QpOptions& opts,
                        const Vec& start) {
  const Eigen::Index d = c.size();
  if (H.rows() != d || H.cols() != d || static_cast<Eigen::Index>(box.dim()) != d ||
      start.size() != d) {
    throw std::invalid_argument("solve_box_qp: dimension mismatch");
  }
  if (!(opts.tol > 0.0)) throw std::invalid_argument("solve_box_qp: tol must be positive");

  QpSolution sol;
  if (d == 0) {
    sol.v = Vec();
    return sol;
  }

  double L = opts.lipschitz > 0.0 ? opts.lipschitz
                                  : lipschitz_estimate(H, opts.power_iters, opts.power_tol);

  Vec v = box.project(start);
  Vec Hv = H * v;
  double val = quad_value(v, Hv, c);
  Vec y = v;
  Vec Hy = Hv;
  double t = 1.0;
  if (opts.record_history) sol.history.push_back(val);

  Vec cand;
  int it = 0;
  for (;; ++it) {
    Vec grad = Hv + c;
    if (opts.polish_every > 0 && it % opts.polish_every == 0 &&
        subspace_candidate(H, c, box, v, grad, cand)) {
      Vec Hc = H * cand;
      const double cval = quad_value(cand, Hc, c);
      // Near the optimum the values agree to rounding; a candidate that
      // satisfies the tolerance is taken regardless.
      if (cval < val || projected_residual(cand, Hc + c, box) <= opts.tol) {
        v = std::move(cand);
        Hv = std::move(Hc);
        val = cval;
        y = v;
        Hy = Hv;
        t = 1.0;
        grad = Hv + c;
        if (opts.record_history) sol.history.push_back(val);
      }
    }
    double res = projected_residual(v, grad, box);
    if (res <= opts.tol) {
      // The residual bounds the distance to the minimizer only up to a
      // factor 1/lambda_min(H); one exact solve on the identified free set
      // usually removes that slack.
      if (opts.polish_every > 0 && subspace_candidate(H, c, box, v, grad, cand)) {
        Vec Hc = H * cand;
        const double cres = projected_residual(cand, Hc + c, box);
        if (cres < res) {
          v = std::move(cand);
          Hv = std::move(Hc);
          val = quad_value(v, Hv, c);
          res = cres;
          if (opts.record_history) sol.history.push_back(val);
        }
      }
      sol.kkt_residual = res;
      sol.status = QpStatus::Converged;
      break;
    }
    if (it >= opts.max_iter) {
      sol.kkt_residual = res;
      sol.status = QpStatus::MaxIterations;
      break;
    }

    Vec next = box.project(y - (Hy + c) / L);
    Vec Hnext = H * next;
    double next_val = quad_value(next, Hnext, c);
    if (next_val > val) {
      // Momentum overshot: restart from the current iterate with a plain
      // projected-gradient step, growing L if even that fails to descend
      // by more than rounding.
      t = 1.0;
      const double noise = 64.0 * std::numeric_limits<double>::epsilon() * (1.0 + std::abs(val));
      for (int guard = 0; guard < 60; ++guard) {
        next = box.project(v - grad / L);
        Hnext = H * next;
        next_val = quad_value(next, Hnext, c);
        if (next_val <= val + noise) break;
        L *= 2.0;
      }
      if (next_val > val + noise) {
        next = v;
        Hnext = Hv;
        next_val = val;
      }
    }
    const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    const double mom = (t - 1.0) / t_next;
    y = next + mom * (next - v);
    Hy = (1.0 + mom) * Hnext - mom * Hv;
    v = std::move(next);
    Hv = std::move(Hnext);
    val = next_val;
    t = t_next;
    if (opts.record_history) sol.history.push_back(val);
  }

  sol.v = std::move(v);
  sol.value = val;
  sol.iterations = it;
  return sol;
}

}  // namespace ampec
