#pragma once

#include "ampec/instance.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace ampec {

/// How the scalar sigma in Sigma = sigma I is picked.
enum class SigmaRule {
  /// sigma^2 = lambda_max(B' A^-1 B) / (2 theta). Gives A1 >= (1 - theta) A,
  /// which is the smallest sigma with that margin.
  Generalized,
  /// sigma^2 = lambda_max(B B') / (2 theta lambda_min(A)). Same margin on
  /// lambda_min(A1) but ignores how B aligns with the spectrum of A.
  Spectral,
};

/// A = A1 - A2 with A2 = -1/2 U'U and B = U' Sigma, Sigma = sigma I.
/// The regularized gap with G = 2 A1 then splits as g = g1 - h1 where
/// h1(y) = 1/2 sigma^2 |y|^2 depends on y alone.
struct Decomposition {
  Mat A1;
  Mat A2;
  Mat U;  // m x n
  double sigma = 1.0;
  Mat G;  // 2 A1
  double theta = 0.9;
  double pd_margin = 0.0;  // lambda_min(A1)
  SigmaRule rule = SigmaRule::Generalized;

  /// Per-coordinate curvature of h1: h1(y) = sum_j xi_j y_j^2, xi_j = sigma^2 / 2.
  double xi() const { return 0.5 * sigma * sigma; }
  /// A1 + A2, the x-coefficient inside the gap maximization.
  Mat coupling() const { return A1 + A2; }
};

/// Throws std::invalid_argument for theta outside (0,1) or a non-PD A.
/// B = 0 yields U = 0, sigma = 1, A2 = 0, A1 = A.
Decomposition build_decomposition(const Instance& inst, double theta = 0.9,
                                  SigmaRule rule = SigmaRule::Generalized);

struct ValidationCheck {
  std::string name;
  double residual = 0.0;
  double threshold = 0.0;
  bool passed = false;
};

struct ValidationReport {
  std::vector<ValidationCheck> checks;

  bool ok() const;
  const ValidationCheck* find(const std::string& name) const;
};

std::ostream& operator<<(std::ostream& os, const ValidationReport& report);

/// Checks every Decomposition invariant against the instance. Failures are
/// reported, never thrown.
ValidationReport validate_decomposition(const Decomposition& dec, const Instance& inst);

}  // namespace ampec
