#pragma once

#include "ampec/envelope.hpp"
#include "ampec/gap_function.hpp"

#include <limits>
#include <optional>

namespace ampec {

enum class RelaxStatus { Optimal, Infeasible, ToleranceNotMet };

const char* to_string(RelaxStatus status);

struct RelaxConfig {
  int max_outer = 50;               // multiplier values tried
  int max_inner = 500;              // Newton iterations per multiplier
  double multiplier_growth = 10.0;  // bracketing factor
  double max_multiplier = 1e12;
  double feasibility_tol = 1e-7;    // accept c <= this
  double stationarity_tol = 1e-7;
  double complementarity_tol = 1e-6;
  double infeasibility_tol = 1e-7;  // declare infeasible when min c > this
  double inner_qp_tol = kGapInnerTol;
  /// Run the constraint-minimization certificate before the main solve, not
  /// only after a failed one.
  bool always_certify = false;
};

/// Starting data, normally the parent node's solution.
struct RelaxStart {
  Vec x;
  Vec y;
  double multiplier = 0.0;
};

struct RelaxResult {
  RelaxStatus status = RelaxStatus::ToleranceNotMet;
  /// Certified lower bound on the relaxed problem; +inf when Infeasible.
  double beta = -std::numeric_limits<double>::infinity();
  double objective = 0.0;  // f(x, y)
  Vec x;
  Vec y;
  double constraint_value = 0.0;
  double kkt_residual = 0.0;
  double multiplier = 0.0;
  int outer_iterations = 0;
  int inner_iterations = 0;
};

/// min f(x, y) over x in X, y in R subject to c = g1(x, y) + l^R(y) <= 0.
///
/// Single-constraint Lagrangian method: for a multiplier lambda the box
/// constrained convex problem min f + lambda c is solved by projected Newton
/// with the generalized Hessian of g1, and lambda is driven to the root of
/// c(v(lambda)) = 0 by bracketing and safeguarded regula falsi. Every
/// multiplier yields a weak-duality bound certified by linearization, so
/// beta is a valid lower bound even when the tolerances are not met.
RelaxResult solve_relaxation(const Instance& inst, const Decomposition& dec, const BoxRegion& region,
                             const RelaxConfig& cfg = {},
                             const std::optional<RelaxStart>& start = std::nullopt);

/// g1(x, y) + l^R(y). Throws NonConvergence if the inner QP fails.
double constraint_value(const Instance& inst, const Decomposition& dec, const BoxRegion& region,
                        const Vec& x, const Vec& y);

/// Minimum of g1 + l^R over X x R: the best point found and a certified
/// lower bound on the minimum.
struct ConstraintMinimum {
  double value = 0.0;
  double lower_bound = 0.0;
  Vec x;
  Vec y;
  bool converged = false;
};

ConstraintMinimum minimize_constraint(const Instance& inst, const Decomposition& dec,
                                      const BoxRegion& region, const RelaxConfig& cfg = {});

}  // namespace ampec
