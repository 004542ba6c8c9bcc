#include "ampec/decomposition.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <stdexcept>

namespace ampec {

Decomposition build_decomposition(const Instance& inst, double theta, SigmaRule rule) {
  if (!(theta > 0.0 && theta < 1.0)) {
    throw std::invalid_argument("build_decomposition: theta must lie in (0, 1)");
  }
  const Mat& A = inst.A;
  const Mat& B = inst.B;
  const auto n = A.rows();
  const auto m = B.cols();

  Eigen::LLT<Mat> llt(A);
  if (llt.info() != Eigen::Success) {
    throw std::invalid_argument("build_decomposition: A is not positive definite");
  }
  const double lmin_a = min_eigenvalue(A);
  if (!(lmin_a > 0.0)) throw std::invalid_argument("build_decomposition: A is not positive definite");

  Decomposition dec;
  dec.theta = theta;
  dec.rule = rule;

  if (B.cwiseAbs().maxCoeff() == 0.0) {
    dec.U = Mat::Zero(m, n);
    dec.sigma = 1.0;
    dec.A2 = Mat::Zero(n, n);
    dec.A1 = A;
  } else {
    double sigma2 = 0.0;
    if (rule == SigmaRule::Generalized) {
      const Mat W = llt.matrixL().solve(B);  // L^-1 B, so W'W = B' A^-1 B
      sigma2 = max_eigenvalue(W.transpose() * W) / (2.0 * theta);
    } else {
      sigma2 = max_eigenvalue(B.transpose() * B) / (2.0 * lmin_a * theta);
    }
    dec.sigma = std::sqrt(sigma2);
    dec.U = B.transpose() / dec.sigma;
    // Column dot products, filled symmetrically, so A2 is bitwise symmetric.
    dec.A2.resize(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
      for (Eigen::Index i = j; i < n; ++i) {
        dec.A2(i, j) = dec.A2(j, i) = -0.5 * dec.U.col(i).dot(dec.U.col(j));
      }
    }
    dec.A1 = A + dec.A2;
  }
  dec.G = 2.0 * dec.A1;
  dec.pd_margin = min_eigenvalue(dec.A1);
  return dec;
}

bool ValidationReport::ok() const {
  return std::all_of(checks.begin(), checks.end(), [](const ValidationCheck& c) { return c.passed; });
}

const ValidationCheck* ValidationReport::find(const std::string& name) const {
  for (const auto& c : checks) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

std::ostream& operator<<(std::ostream& os, const ValidationReport& report) {
  for (const auto& c : report.checks) {
    os << (c.passed ? "PASS " : "FAIL ") << std::left << std::setw(22) << c.name
       << " residual=" << std::scientific << std::setprecision(3) << c.residual
       << " threshold=" << c.threshold << std::defaultfloat << '\n';
  }
  return os;
}

ValidationReport validate_decomposition(const Decomposition& dec, const Instance& inst) {
  ValidationReport report;
  const Mat& A = inst.A;
  const Mat& B = inst.B;
  const auto n = A.rows();
  const auto m = B.cols();

  auto add = [&](std::string name, double residual, double threshold, bool passed) {
    report.checks.push_back({std::move(name), residual, threshold, passed});
  };

  const bool shapes = dec.A1.rows() == n && dec.A1.cols() == n && dec.A2.rows() == n &&
                      dec.A2.cols() == n && dec.U.rows() == m && dec.U.cols() == n &&
                      dec.G.rows() == n && dec.G.cols() == n;
  add("shapes", shapes ? 0.0 : 1.0, 0.0, shapes);
  if (!shapes) return report;

  {
    const double r = (A - (dec.A1 - dec.A2)).cwiseAbs().maxCoeff();
    const double thr = 1e-10 * (1.0 + A.cwiseAbs().maxCoeff());
    add("A = A1 - A2", r, thr, r <= thr);
  }
  {
    const double r = (dec.U.transpose() * dec.sigma - B).cwiseAbs().maxCoeff();
    const double thr = 1e-8 * (1.0 + B.cwiseAbs().maxCoeff());
    add("U'Sigma = B", r, thr, r <= thr && dec.sigma > 0.0);
  }
  {
    const Mat S = dec.A2 + 0.5 * dec.U.transpose() * dec.U;
    const double r = S.cwiseAbs().maxCoeff();
    const double thr = 1e-12 * (1.0 + dec.A2.cwiseAbs().maxCoeff());
    add("A2 + U'U/2 = 0", r, thr, r <= thr);
  }
  {
    const double r = (dec.A1 - dec.A1.transpose()).cwiseAbs().maxCoeff();
    const double thr = 1e-12 * (1.0 + dec.A1.cwiseAbs().maxCoeff());
    add("A1 symmetric", r, thr, r <= thr);
  }
  {
    const double lmin_a1 = min_eigenvalue(0.5 * (dec.A1 + dec.A1.transpose()));
    const double required = (1.0 - dec.theta) * min_eigenvalue(A) - 1e-8;
    // residual: how far lambda_min(A1) sits below the required margin (<= 0 passes).
    add("A1 positive definite", required - lmin_a1, 0.0, lmin_a1 > 0.0 && lmin_a1 >= required);
  }
  {
    const double r = (dec.G - 2.0 * dec.A1).cwiseAbs().maxCoeff();
    add("G = 2 A1", r, 0.0, r == 0.0);
  }
  return report;
}

}  // namespace ampec
