#pragma once

#include "ampec/box_region.hpp"

#include <cstdint>
#include <optional>

namespace ampec {

/// f(x, y) = 1/2 x'Q1x + 1/2 y'Q2y + q1'x + q2'y with Q1, Q2 symmetric PSD.
struct QuadObjective {
  Mat Q1;
  Mat Q2;
  Vec q1;
  Vec q2;

  double value(const Vec& x, const Vec& y) const;
  Vec grad_x(const Vec& x) const { return Q1 * x + q1; }
  Vec grad_y(const Vec& y) const { return Q2 * y + q2; }

  static QuadObjective zero(std::size_t n, std::size_t m);
};

/// Nash-Cournot market data: price alpha - beta * total output, unit
/// material prices c (firms x materials), production caps eta and material
/// caps xi.
struct NashCournotParams {
  std::size_t n = 0;
  std::size_t m = 0;
  double alpha = 0.0;
  double beta = 0.0;
  Mat c;
  Vec eta;
  Vec xi;
  QuadObjective objective;
};

/// Upper level: min f(x, y) over x in X, y in Y.
/// Lower level: x solves (Ax + By + a)'(v - x) >= 0 for all v in X.
///
/// A must be symmetric positive definite; X and Y are bounded boxes.
struct Instance {
  std::size_t n = 0;
  std::size_t m = 0;
  Mat A;
  Mat B;
  Vec a;
  BoxRegion X;
  BoxRegion Y;
  QuadObjective objective;
  std::optional<NashCournotParams> nash_cournot;
};

/// Throws std::invalid_argument describing the first violated invariant.
void validate_instance(const Instance& inst);

/// A = beta (I + ee'), B = c, a = -alpha e, X = prod [0, eta_j],
/// Y = prod [0, xi_i].
Instance build_nash_cournot(const NashCournotParams& params);

/// Random Nash-Cournot instance: beta = 0.125, alpha = 10, c ~ U(0,1),
/// X = [0,5]^n, Y = [0,5]^m, Q = MM'/dim + 0.1 I with standard normal M,
/// q ~ U(-1,1). Bit-reproducible for a given (seed, n, m).
Instance generate_random(std::uint64_t seed, std::size_t n, std::size_t m);

/// Throws std::invalid_argument on dimension mismatch.
double eval_objective(const Instance& inst, const Vec& x, const Vec& y);

/// Smallest eigenvalue of a symmetric matrix. Dense eigensolve up to
/// dimension 500, shifted power iteration above.
double min_eigenvalue(const Mat& S);
double max_eigenvalue(const Mat& S);

}  // namespace ampec
