#pragma once

#include "ampec/decomposition.hpp"
#include "ampec/qp_box.hpp"

#include <stdexcept>

namespace ampec {

/// Inner QP tolerance used for every gap-function evaluation.
inline constexpr double kGapInnerTol = 1e-9;
/// Default threshold for g <= tol in the equilibrium test.
inline constexpr double kFeasibilityTol = 1e-6;

class NonConvergence : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct GapEval {
  double g = 0.0;
  double g1 = 0.0;
  double h1 = 0.0;
  Vec z;  // argmax of the inner problem
  Vec grad_x_g1;
  Vec grad_y_g1;
  bool converged = true;
};

/// Evaluates the DC pieces of the regularized gap
///
///   g(x,y)  = max_{v in X} (x-v)'(Ax+By+a) - 1/2 (v-x)'G(v-x),   G = 2 A1
///   g1(x,y) = 1/2 |Ux + sigma y|^2 + a'x + max_{v in X} -v'A1v + w'v,
///             w = (A1+A2)x - By - a
///   h1(y)   = 1/2 sigma^2 |y|^2
///
/// The inner maximizer z(x,y) is the box QP min v'A1v - w'v, warm-started
/// from the previous call, so one evaluator should not be shared between
/// threads.
class GapEvaluator {
 public:
  GapEvaluator(const Instance& inst, const Decomposition& dec, double inner_tol = kGapInnerTol);

  /// g1, h1, g = g1 - h1, z and grad g1. Never throws on QP trouble; check
  /// `converged`.
  GapEval evaluate(const Vec& x, const Vec& y, bool with_gradient = true);

  /// z(x,y) with QP diagnostics.
  QpSolution inner_argmax(const Vec& x, const Vec& y);

  /// g through its defining maximization, independent of the split.
  /// Sets `converged` when non-null.
  double gap_direct(const Vec& x, const Vec& y, bool* converged = nullptr);

  double h1(const Vec& y) const { return 0.5 * dec_.sigma * dec_.sigma * y.squaredNorm(); }

  /// Generalized Hessian of g1 at the point that produced `ev`, over the
  /// stacked variable (x, y). Exact wherever the active set of z is locally
  /// constant.
  Mat g1_hessian(const GapEval& ev) const;

  const Instance& instance() const { return inst_; }
  const Decomposition& decomposition() const { return dec_; }

  void reset_warm_start() { has_warm_ = false; }

 private:
  const Instance& inst_;
  const Decomposition& dec_;
  Mat coupling_;  // A1 + A2
  QpOptions qp_;
  Vec warm_z_;
  bool has_warm_ = false;
};

/// Free-function forms; these throw NonConvergence if the inner QP fails and
/// std::domain_error if x is outside X by more than 1e-9.
Vec inner_argmax(const Decomposition& dec, const Instance& inst, const Vec& x, const Vec& y);
double eval_g(const Decomposition& dec, const Instance& inst, const Vec& x, const Vec& y);
double eval_g1(const Decomposition& dec, const Instance& inst, const Vec& x, const Vec& y);
double eval_h1(const Decomposition& dec, const Vec& y);
std::pair<Vec, Vec> grad_g1(const Decomposition& dec, const Instance& inst, const Vec& x, const Vec& y);

/// x in X and y in Y (1e-9 slack) and g(x,y) <= tol.
bool is_equilibrium_feasible(const Decomposition& dec, const Instance& inst, const Vec& x,
                             const Vec& y, double tol = kFeasibilityTol);

}  // namespace ampec
