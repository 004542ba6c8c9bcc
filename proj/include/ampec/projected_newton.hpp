#pragma once

#include "ampec/box_region.hpp"

#include <functional>

namespace ampec {

/// Value, gradient and (generalized) Hessian of a convex C^1 function.
/// `ok == false` marks an evaluation that could not be trusted (for example
/// an inner solver that stopped short); the minimizer then gives up.
struct SmoothEval {
  double value = 0.0;
  Vec grad;
  Mat hess;
  bool ok = true;
  /// Magnitude of the terms summed into `value`, for judging rounding when
  /// they cancel. Zero means |value|.
  double scale = 0.0;
};

/// Callback: evaluate at v; the Hessian is only needed when `second` is set.
/// Line-search trials are evaluated without it and an accepted point is
/// evaluated again with it, so a callback may cache its last evaluation.
using SmoothFunction = std::function<SmoothEval(const Vec& v, bool second)>;

struct NewtonOptions {
  double tol = 1e-9;          // projected-gradient residual target
  int max_iter = 200;
  double armijo = 1e-4;
  double active_eps = 1e-3;   // cap on the epsilon-active threshold
};

struct NewtonResult {
  Vec v;
  SmoothEval at;  // evaluation at v (with gradient)
  double residual = 0.0;
  int iterations = 0;
  int evaluations = 0;
  bool converged = false;
};

/// Two-metric projected Newton for box constraints: Newton direction on the
/// variables not held at a bound, scaled gradient on the rest, Armijo
/// backtracking along the projection arc.
NewtonResult projected_newton(const SmoothFunction& fn, const BoxRegion& box, Vec start,
                              const NewtonOptions& opts = {});

/// || v - P_box(v - grad) ||_inf
double projected_gradient_residual(const Vec& v, const Vec& grad, const BoxRegion& box);

/// Lower bound on min over the box of a convex function from its value and
/// gradient at v: value + sum_i min(grad_i (lo_i - v_i), grad_i (hi_i - v_i)).
double linearization_lower_bound(double value, const Vec& grad, const Vec& v, const BoxRegion& box);

}  // namespace ampec
