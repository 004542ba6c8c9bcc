#pragma once

#include "ampec/box_region.hpp"

#include <vector>

namespace ampec {

enum class QpStatus { Converged, MaxIterations };

struct QpSolution {
  Vec v;
  double value = 0.0;
  double kkt_residual = 0.0;
  int iterations = 0;
  QpStatus status = QpStatus::Converged;
  /// Objective after every accepted iterate, when QpOptions::record_history.
  std::vector<double> history;

  bool converged() const { return status == QpStatus::Converged; }
};

struct QpOptions {
  double tol = 1e-8;
  int max_iter = 20000;
  int power_iters = 50;
  double power_tol = 1e-10;
  /// Lipschitz constant of the gradient (lambda_max(H)); estimated by power
  /// iteration when <= 0. Callers solving many QPs with one H pass it in.
  double lipschitz = 0.0;
  /// Try an exact solve on the current free set every this many iterations.
  int polish_every = 25;
  bool record_history = false;
};

/// min 1/2 v'Hv + c'v  s.t.  v in box, for symmetric positive definite H.
///
/// Accelerated projected gradient (step 1/L) with function-value restart,
/// which keeps the objective sequence monotone. Periodically the free
/// variables are solved for exactly with the bound ones held fixed; the
/// candidate is accepted only if it lowers the objective.
/// On budget exhaustion the best iterate is returned with MaxIterations.
QpSolution solve_box_qp(const Mat& H, const Vec& c, const BoxRegion& box,
                        const QpOptions& opts = {});
QpSolution solve_box_qp(const Mat& H, const Vec& c, const BoxRegion& box,
                        const QpOptions& opts, const Vec& start);

/// || v - P_box(v - (Hv + c)) ||_inf; zero exactly at the minimizer.
double kkt_residual(const Mat& H, const Vec& c, const BoxRegion& box, const Vec& v);

/// Largest eigenvalue of symmetric PSD H by power iteration, inflated
/// slightly and capped by the Gershgorin bound so that 1/L is a safe step.
double lipschitz_estimate(const Mat& H, int iters = 50, double rel_tol = 1e-10);

}  // namespace ampec
