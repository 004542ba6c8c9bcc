#include "ampec/gap_function.hpp"

#include <vector>

namespace ampec {

namespace {

constexpr double kDomainSlack = 1e-9;

void require_x_in_box(const Instance& inst, const Vec& x) {
  if (static_cast<std::size_t>(x.size()) != inst.n) {
    throw std::invalid_argument("gap function: x has wrong dimension");
  }
  if (!inst.X.contains(x, kDomainSlack)) throw std::domain_error("gap function: x lies outside X");
}

void require_y_dim(const Instance& inst, const Vec& y) {
  if (static_cast<std::size_t>(y.size()) != inst.m) {
    throw std::invalid_argument("gap function: y has wrong dimension");
  }
}

}  // namespace

GapEvaluator::GapEvaluator(const Instance& inst, const Decomposition& dec, double inner_tol)
    : inst_(inst), dec_(dec), coupling_(dec.A1 + dec.A2) {
  qp_.tol = inner_tol;
  qp_.lipschitz = lipschitz_estimate(dec.G);
}

QpSolution GapEvaluator::inner_argmax(const Vec& x, const Vec& y) {
  // max -v'A1v + w'v  <=>  min 1/2 v'(2A1)v - w'v
  const Vec w = coupling_ * x - inst_.B * y - inst_.a;
  QpSolution sol = has_warm_ ? solve_box_qp(dec_.G, -w, inst_.X, qp_, warm_z_)
                             : solve_box_qp(dec_.G, -w, inst_.X, qp_);
  warm_z_ = sol.v;
  has_warm_ = true;
  return sol;
}

GapEval GapEvaluator::evaluate(const Vec& x, const Vec& y, bool with_gradient) {
  GapEval ev;
  const Vec w = coupling_ * x - inst_.B * y - inst_.a;
  QpSolution sol = inner_argmax(x, y);
  ev.converged = sol.converged();
  ev.z = std::move(sol.v);
  const Vec r = dec_.U * x + dec_.sigma * y;
  const double inner = -ev.z.dot(dec_.A1 * ev.z) + w.dot(ev.z);
  ev.g1 = 0.5 * r.squaredNorm() + inst_.a.dot(x) + inner;
  ev.h1 = h1(y);
  ev.g = ev.g1 - ev.h1;
  if (with_gradient) {
    ev.grad_x_g1 = dec_.U.transpose() * r + inst_.a + coupling_.transpose() * ev.z;
    ev.grad_y_g1 = dec_.sigma * r - inst_.B.transpose() * ev.z;
  }
  return ev;
}

double GapEvaluator::gap_direct(const Vec& x, const Vec& y, bool* converged) {
  // max_v (x-v)'F - 1/2 (v-x)'G(v-x)  <=>  min_v 1/2 v'Gv + (F - Gx)'v
  const Vec F = inst_.A * x + inst_.B * y + inst_.a;
  const Vec c = F - dec_.G * x;
  QpSolution sol = solve_box_qp(dec_.G, c, inst_.X, qp_, inst_.X.project(x));
  if (converged) *converged = sol.converged();
  const Vec d = sol.v - x;
  return -d.dot(F) - 0.5 * d.dot(dec_.G * d);
}

Mat GapEvaluator::g1_hessian(const GapEval& ev) const {
  const Eigen::Index n = static_cast<Eigen::Index>(inst_.n);
  const Eigen::Index m = static_cast<Eigen::Index>(inst_.m);
  const Eigen::Index N = n + m;

  Mat M(m, N);
  M.leftCols(n) = dec_.U;
  M.rightCols(m) = dec_.sigma * Mat::Identity(m, m);
  Mat H = M.transpose() * M;

  std::vector<Eigen::Index> free_idx;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (ev.z[i] > inst_.X.lo[i] && ev.z[i] < inst_.X.hi[i]) free_idx.push_back(i);
  }
  if (!free_idx.empty()) {
    // Second derivative of the inner value function: 1/2 E_F A1_FF^-1 E_F'.
    const auto k = static_cast<Eigen::Index>(free_idx.size());
    Mat J(k, N);
    J.leftCols(n) = coupling_(free_idx, Eigen::all);
    J.rightCols(m) = -inst_.B(free_idx, Eigen::all);
    Eigen::LLT<Mat> llt(dec_.A1(free_idx, free_idx));
    const Mat S = llt.matrixL().solve(J);
    H.noalias() += 0.5 * S.transpose() * S;
  }
  return H;
}

Vec inner_argmax(const Decomposition& dec, const Instance& inst, const Vec& x, const Vec& y) {
  require_x_in_box(inst, x);
  require_y_dim(inst, y);
  GapEvaluator ge(inst, dec);
  QpSolution sol = ge.inner_argmax(x, y);
  if (!sol.converged()) throw NonConvergence("inner_argmax: box QP did not converge");
  return sol.v;
}

double eval_g(const Decomposition& dec, const Instance& inst, const Vec& x, const Vec& y) {
  require_x_in_box(inst, x);
  require_y_dim(inst, y);
  GapEvaluator ge(inst, dec);
  bool ok = true;
  const double g = ge.gap_direct(x, y, &ok);
  if (!ok) throw NonConvergence("eval_g: box QP did not converge");
  return g;
}

double eval_g1(const Decomposition& dec, const Instance& inst, const Vec& x, const Vec& y) {
  require_x_in_box(inst, x);
  require_y_dim(inst, y);
  GapEvaluator ge(inst, dec);
  GapEval ev = ge.evaluate(x, y, false);
  if (!ev.converged) throw NonConvergence("eval_g1: box QP did not converge");
  return ev.g1;
}

double eval_h1(const Decomposition& dec, const Vec& y) {
  return 0.5 * dec.sigma * dec.sigma * y.squaredNorm();
}

std::pair<Vec, Vec> grad_g1(const Decomposition& dec, const Instance& inst, const Vec& x,
                            const Vec& y) {
  require_x_in_box(inst, x);
  require_y_dim(inst, y);
  GapEvaluator ge(inst, dec);
  GapEval ev = ge.evaluate(x, y, true);
  if (!ev.converged) throw NonConvergence("grad_g1: box QP did not converge");
  return {std::move(ev.grad_x_g1), std::move(ev.grad_y_g1)};
}

bool is_equilibrium_feasible(const Decomposition& dec, const Instance& inst, const Vec& x,
                             const Vec& y, double tol) {
  if (static_cast<std::size_t>(x.size()) != inst.n || static_cast<std::size_t>(y.size()) != inst.m) {
    return false;
  }
  if (!inst.X.contains(x, kDomainSlack) || !inst.Y.contains(y, kDomainSlack)) return false;
  GapEvaluator ge(inst, dec);
  bool ok = true;
  const double g = ge.gap_direct(inst.X.project(x), y, &ok);
  return ok && g <= tol;
}

}  // namespace ampec
