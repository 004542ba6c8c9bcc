#include "ampec/relax.hpp"

#include "ampec/projected_newton.hpp"

#include <algorithm>
#include <cmath>

namespace ampec {

const char* to_string(RelaxStatus status) {
  switch (status) {
    case RelaxStatus::Optimal: return "optimal";
    case RelaxStatus::Infeasible: return "infeasible";
    case RelaxStatus::ToleranceNotMet: return "tolerance_not_met";
  }
  return "unknown";
}

namespace {

BoxRegion joint_box(const Instance& inst, const BoxRegion& region) {
  const Eigen::Index n = static_cast<Eigen::Index>(inst.n);
  const Eigen::Index m = static_cast<Eigen::Index>(inst.m);
  Vec lo(n + m), hi(n + m);
  lo << inst.X.lo, region.lo;
  hi << inst.X.hi, region.hi;
  return {std::move(lo), std::move(hi)};
}

// c(v) = g1(x, y) + l^R(y) over the stacked v = (x, y). Remembers the last
// evaluation so the Hessian request that follows an accepted step reuses
// the inner QP solve.
class Constraint {
 public:
  Constraint(const Instance& inst, const Decomposition& dec, const BoxRegion& region, double qp_tol)
      : ge_(inst, dec, qp_tol), env_(envelope(dec, region)),
        n_(static_cast<Eigen::Index>(inst.n)), m_(static_cast<Eigen::Index>(inst.m)) {}

  struct Point {
    double value = 0.0;
    Vec grad;
    bool ok = true;
    double scale = 0.0;  // size of the cancelling terms in value
  };

  Point eval(const Vec& v) {
    const GapEval& ev = at(v);
    Point p;
    p.ok = ev.converged;
    const double l = env_.value(v.tail(m_));
    p.value = ev.g1 + l;
    p.scale = std::abs(ev.g1) + std::abs(l);
    p.grad.resize(n_ + m_);
    p.grad << ev.grad_x_g1, ev.grad_y_g1 + env_.slopes;
    return p;
  }

  Mat hessian(const Vec& v) { return ge_.g1_hessian(at(v)); }

 private:
  const GapEval& at(const Vec& v) {
    if (!has_last_ || v != last_v_) {
      last_ = ge_.evaluate(v.head(n_), v.tail(m_), true);
      last_v_ = v;
      has_last_ = true;
    }
    return last_;
  }

  GapEvaluator ge_;
  EnvelopeAffine env_;
  Eigen::Index n_;
  Eigen::Index m_;
  Vec last_v_;
  GapEval last_;
  bool has_last_ = false;
};

struct Objective {
  Mat H;
  Vec q;

  explicit Objective(const Instance& inst) {
    const Eigen::Index n = static_cast<Eigen::Index>(inst.n);
    const Eigen::Index m = static_cast<Eigen::Index>(inst.m);
    H = Mat::Zero(n + m, n + m);
    H.topLeftCorner(n, n) = inst.objective.Q1;
    H.bottomRightCorner(m, m) = inst.objective.Q2;
    q.resize(n + m);
    q << inst.objective.q1, inst.objective.q2;
  }
  double value(const Vec& v) const { return 0.5 * v.dot(H * v) + q.dot(v); }
  Vec grad(const Vec& v) const { return H * v + q; }
};

NewtonOptions inner_options(const RelaxConfig& cfg) {
  NewtonOptions o;
  o.tol = cfg.stationarity_tol;
  o.max_iter = cfg.max_inner;
  return o;
}

}  // namespace

double constraint_value(const Instance& inst, const Decomposition& dec, const BoxRegion& region,
                        const Vec& x, const Vec& y) {
  return eval_g1(dec, inst, x, y) + envelope(dec, region).value(y);
}

ConstraintMinimum minimize_constraint(const Instance& inst, const Decomposition& dec,
                                      const BoxRegion& region, const RelaxConfig& cfg) {
  const BoxRegion box = joint_box(inst, region);
  Constraint con(inst, dec, region, cfg.inner_qp_tol);
  auto fn = [&](const Vec& v, bool second) {
    const Constraint::Point p = con.eval(v);
    SmoothEval e;
    e.value = p.value;
    e.grad = p.grad;
    e.ok = p.ok;
    if (second) e.hess = con.hessian(v);
    return e;
  };
  const NewtonResult nr = projected_newton(fn, box, box.center(), inner_options(cfg));
  ConstraintMinimum out;
  const Eigen::Index n = static_cast<Eigen::Index>(inst.n);
  out.x = nr.v.head(n);
  out.y = nr.v.tail(static_cast<Eigen::Index>(inst.m));
  out.value = nr.at.value;
  out.converged = nr.at.ok;
  out.lower_bound = nr.at.ok ? linearization_lower_bound(nr.at.value, nr.at.grad, nr.v, box)
                             : -std::numeric_limits<double>::infinity();
  return out;
}

namespace {

// One multiplier: minimizer of f + lambda c over the box and its certificate.
struct LagrangePoint {
  double lambda = 0.0;
  Vec v;
  double f = 0.0;
  double c = 0.0;
  double residual = 0.0;
  double bound = -std::numeric_limits<double>::infinity();
  bool ok = false;
};

class LagrangeSolver {
 public:
  LagrangeSolver(const Instance& inst, const Decomposition& dec, const BoxRegion& region,
                 const RelaxConfig& cfg)
      : f_(inst), con_(inst, dec, region, cfg.inner_qp_tol), box_(joint_box(inst, region)),
        opts_(inner_options(cfg)) {}

  const BoxRegion& box() const { return box_; }
  int inner_iterations() const { return inner_; }

  LagrangePoint solve(double lambda, const Vec& start) {
    auto fn = [&](const Vec& p, bool second) {
      const Constraint::Point c = con_.eval(p);
      SmoothEval e;
      e.ok = c.ok;
      const double fv = f_.value(p);
      e.value = fv + lambda * c.value;
      e.scale = std::abs(fv) + lambda * c.scale;
      e.grad = f_.grad(p) + lambda * c.grad;
      if (second) {
        e.hess = f_.H;
        if (lambda > 0.0) e.hess.noalias() += lambda * con_.hessian(p);
      }
      return e;
    };
    const NewtonResult nr = projected_newton(fn, box_, start, opts_);
    inner_ += nr.iterations;
    LagrangePoint pt;
    pt.lambda = lambda;
    pt.v = nr.v;
    const Constraint::Point c = con_.eval(pt.v);
    pt.ok = c.ok;
    pt.f = f_.value(pt.v);
    pt.c = c.value;
    const Vec grad = f_.grad(pt.v) + lambda * c.grad;
    pt.residual = projected_gradient_residual(pt.v, grad, box_);
    // Weak duality: min f + lambda c over the box is at most the relaxed
    // optimum, and convexity bounds that minimum by linearization at v.
    if (pt.ok) pt.bound = linearization_lower_bound(pt.f + lambda * pt.c, grad, pt.v, box_);
    return pt;
  }

 private:
  Objective f_;
  Constraint con_;
  BoxRegion box_;
  NewtonOptions opts_;
  int inner_ = 0;
};

}  // namespace

RelaxResult solve_relaxation(const Instance& inst, const Decomposition& dec, const BoxRegion& region,
                             const RelaxConfig& cfg, const std::optional<RelaxStart>& start) {
  const Eigen::Index n = static_cast<Eigen::Index>(inst.n);
  const Eigen::Index m = static_cast<Eigen::Index>(inst.m);
  RelaxResult res;

  auto infeasible = [&](const ConstraintMinimum& cm) {
    res.status = RelaxStatus::Infeasible;
    res.beta = std::numeric_limits<double>::infinity();
    res.x = cm.x;
    res.y = cm.y;
    res.constraint_value = cm.value;
    res.objective = eval_objective(inst, cm.x, cm.y);
    return res;
  };

  if (cfg.always_certify) {
    const ConstraintMinimum cm = minimize_constraint(inst, dec, region, cfg);
    if (cm.converged && cm.lower_bound > cfg.infeasibility_tol) return infeasible(cm);
  }

  LagrangeSolver solver(inst, dec, region, cfg);
  const BoxRegion& box = solver.box();
  Vec v = box.center();
  double lambda = 0.0;
  if (start && start->x.size() == n && start->y.size() == m) {
    v << start->x, start->y;
    v = box.project(v);
    lambda = std::max(0.0, start->multiplier);
  }

  double best_bound = -std::numeric_limits<double>::infinity();
  bool trusted = true;
  int evaluations = 0;
  auto evaluate = [&](double lam, const Vec& from) {
    LagrangePoint pt = solver.solve(lam, from);
    ++evaluations;
    if (!pt.ok) trusted = false;
    if (pt.ok) best_bound = std::max(best_bound, pt.bound);
    return pt;
  };
  auto done = [&](const LagrangePoint& pt) {
    return pt.ok && pt.c <= cfg.feasibility_tol && pt.lambda * std::abs(pt.c) <= cfg.complementarity_tol &&
           pt.residual <= cfg.stationarity_tol;
  };

  // c(v(lambda)) is nonincreasing in lambda. Bracket its root between a
  // multiplier with c > 0 (lo) and one with c <= 0 (hi).
  std::optional<LagrangePoint> lo;
  std::optional<LagrangePoint> hi;
  LagrangePoint cur = evaluate(lambda, v);
  bool solved = done(cur);
  if (!solved && trusted) {
    (cur.c > 0.0 ? lo : hi) = cur;
    if (hi && hi->lambda > 0.0) {
      cur = evaluate(0.0, hi->v);
      solved = done(cur);
      if (!solved) (cur.c > 0.0 ? lo : hi) = cur;
    }
    while (!solved && trusted && !hi && evaluations < cfg.max_outer) {
      const double next = std::max(lo->lambda * cfg.multiplier_growth, 1.0);
      if (next > cfg.max_multiplier) break;
      cur = evaluate(next, lo->v);
      solved = done(cur);
      if (!solved) (cur.c > 0.0 ? lo : hi) = cur;
    }
    // Illinois regula falsi, in log(lambda) once both ends are positive.
    double c_lo = lo ? lo->c : 0.0;
    double c_hi = hi ? hi->c : 0.0;
    int side = 0;
    while (!solved && trusted && lo && hi && evaluations < cfg.max_outer) {
      const bool logscale = lo->lambda > 0.0;
      const double a = logscale ? std::log(lo->lambda) : lo->lambda;
      const double b = logscale ? std::log(hi->lambda) : hi->lambda;
      double t = c_lo / (c_lo - c_hi);
      t = std::clamp(t, 0.01, 0.99);
      if (!std::isfinite(t)) t = 0.5;
      const double s = a + t * (b - a);
      const double next = logscale ? std::exp(s) : s;
      if (!(next > lo->lambda && next < hi->lambda)) break;
      cur = evaluate(next, cur.v);
      solved = done(cur);
      if (solved) break;
      if (cur.c > 0.0) {
        lo = cur;
        c_lo = cur.c;
        if (side == -1) c_hi *= 0.5;
        side = -1;
      } else {
        hi = cur;
        c_hi = cur.c;
        if (side == 1) c_lo *= 0.5;
        side = 1;
      }
    }
    if (!solved && hi) cur = *hi;
  }

  res.outer_iterations = evaluations;
  res.inner_iterations = solver.inner_iterations();
  res.x = cur.v.head(n);
  res.y = cur.v.tail(m);
  res.objective = cur.f;
  res.constraint_value = cur.c;
  res.multiplier = cur.lambda;
  res.kkt_residual = cur.residual;
  if (trusted) res.beta = best_bound;
  if (solved) {
    res.status = RelaxStatus::Optimal;
    return res;
  }
  res.status = RelaxStatus::ToleranceNotMet;
  if (!trusted || cur.c > cfg.feasibility_tol) {
    const ConstraintMinimum cm = minimize_constraint(inst, dec, region, cfg);
    if (cm.converged && cm.lower_bound > cfg.infeasibility_tol) return infeasible(cm);
  }
  return res;
}

}  // namespace ampec
