#include "ampec/instance.hpp"

#include "ampec/rng.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <string>

namespace ampec {

double QuadObjective::value(const Vec& x, const Vec& y) const {
  return 0.5 * x.dot(Q1 * x) + 0.5 * y.dot(Q2 * y) + q1.dot(x) + q2.dot(y);
}

QuadObjective QuadObjective::zero(std::size_t n, std::size_t m) {
  const auto ni = static_cast<Eigen::Index>(n);
  const auto mi = static_cast<Eigen::Index>(m);
  return {Mat::Zero(ni, ni), Mat::Zero(mi, mi), Vec::Zero(ni), Vec::Zero(mi)};
}

double min_eigenvalue(const Mat& S) {
  if (S.rows() == 0) return 0.0;
  if (S.rows() <= 500) {
    Eigen::SelfAdjointEigenSolver<Mat> es(S, Eigen::EigenvaluesOnly);
    return es.eigenvalues()(0);
  }
  // lambda_min(S) = shift - lambda_max(shift I - S) with shift >= lambda_max(S).
  const double shift = S.cwiseAbs().rowwise().sum().maxCoeff();
  const Mat T = shift * Mat::Identity(S.rows(), S.cols()) - S;
  return shift - max_eigenvalue(T);
}

double max_eigenvalue(const Mat& S) {
  if (S.rows() == 0) return 0.0;
  if (S.rows() <= 500) {
    Eigen::SelfAdjointEigenSolver<Mat> es(S, Eigen::EigenvaluesOnly);
    return es.eigenvalues()(S.rows() - 1);
  }
  Vec v = Vec::Ones(S.rows()).normalized();
  double lambda = 0.0;
  for (int it = 0; it < 2000; ++it) {
    Vec w = S * v;
    const double next = v.dot(w);
    const double nw = w.norm();
    if (nw == 0.0) return 0.0;
    v = w / nw;
    if (std::abs(next - lambda) <= 1e-13 * std::max(1.0, std::abs(next))) {
      lambda = next;
      break;
    }
    lambda = next;
  }
  return lambda;
}

namespace {

[[noreturn]] void fail(const std::string& what) { throw std::invalid_argument(what); }

void check_shape(const Mat& M, std::size_t rows, std::size_t cols, const char* name) {
  if (static_cast<std::size_t>(M.rows()) != rows || static_cast<std::size_t>(M.cols()) != cols) {
    std::ostringstream os;
    os << name << " must be " << rows << "x" << cols << ", got " << M.rows() << "x" << M.cols();
    fail(os.str());
  }
}

void check_len(const Vec& v, std::size_t len, const char* name) {
  if (static_cast<std::size_t>(v.size()) != len) {
    std::ostringstream os;
    os << name << " must have length " << len << ", got " << v.size();
    fail(os.str());
  }
}

void check_finite(const Mat& M, const char* name) {
  if (!M.allFinite()) fail(std::string(name) + " has non-finite entries");
}

void check_symmetric(const Mat& M, const char* name) {
  const double scale = 1.0 + M.cwiseAbs().maxCoeff();
  const double asym = (M - M.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-10 * scale) fail(std::string(name) + " is not symmetric");
}

void check_psd(const Mat& M, const char* name) {
  if (M.rows() == 0) return;
  const Mat S = 0.5 * (M + M.transpose());
  const double lmin = min_eigenvalue(S);
  const double lmax = max_eigenvalue(S);
  if (lmin < -1e-8 * (1.0 + std::abs(lmax))) {
    fail(std::string(name) + " is not positive semidefinite");
  }
}

}  // namespace

void validate_instance(const Instance& inst) {
  const std::size_t n = inst.n;
  const std::size_t m = inst.m;
  if (n == 0 || m == 0) fail("dimensions n and m must be positive");
  check_shape(inst.A, n, n, "A");
  check_shape(inst.B, n, m, "B");
  check_len(inst.a, n, "a");
  check_finite(inst.A, "A");
  check_finite(inst.B, "B");
  check_finite(inst.a, "a");
  check_symmetric(inst.A, "A");
  {
    const Mat S = 0.5 * (inst.A + inst.A.transpose());
    Eigen::LLT<Mat> llt(S);
    if (llt.info() != Eigen::Success || llt.matrixL().toDenseMatrix().diagonal().minCoeff() <= 0.0) {
      fail("A is not positive definite");
    }
  }
  check_len(inst.X.lo, n, "x_lo");
  check_len(inst.X.hi, n, "x_hi");
  check_len(inst.Y.lo, m, "y_lo");
  check_len(inst.Y.hi, m, "y_hi");
  if (!inst.X.valid()) fail("X must be a nonempty bounded box");
  if (!inst.Y.valid()) fail("Y must be a nonempty bounded box");

  const QuadObjective& obj = inst.objective;
  check_shape(obj.Q1, n, n, "Q1");
  check_shape(obj.Q2, m, m, "Q2");
  check_len(obj.q1, n, "q1");
  check_len(obj.q2, m, "q2");
  check_finite(obj.Q1, "Q1");
  check_finite(obj.Q2, "Q2");
  check_finite(obj.q1, "q1");
  check_finite(obj.q2, "q2");
  check_symmetric(obj.Q1, "Q1");
  check_symmetric(obj.Q2, "Q2");
  check_psd(obj.Q1, "Q1");
  check_psd(obj.Q2, "Q2");
}

Instance build_nash_cournot(const NashCournotParams& p) {
  const std::size_t n = p.n;
  const std::size_t m = p.m;
  if (n == 0 || m == 0) fail("Nash-Cournot model needs at least one firm and one material");
  if (!(p.alpha > 0.0)) fail("alpha must be positive");
  if (!(p.beta > 0.0)) fail("beta must be positive");
  check_shape(p.c, n, m, "c");
  check_len(p.eta, n, "eta");
  check_len(p.xi, m, "xi");
  if (!(p.eta.array() > 0.0).all()) fail("eta must be positive");
  if (!(p.xi.array() > 0.0).all()) fail("xi must be positive");

  const auto ni = static_cast<Eigen::Index>(n);
  const auto mi = static_cast<Eigen::Index>(m);
  Instance inst;
  inst.n = n;
  inst.m = m;
  inst.A = Mat::Constant(ni, ni, p.beta);
  inst.A.diagonal().setConstant(2.0 * p.beta);
  inst.B = p.c;
  inst.a = Vec::Constant(ni, -p.alpha);
  inst.X = BoxRegion(Vec::Zero(ni), p.eta);
  inst.Y = BoxRegion(Vec::Zero(mi), p.xi);
  inst.objective = p.objective;
  inst.nash_cournot = p;
  validate_instance(inst);
  return inst;
}

namespace {

// Q = M M' / dim + 0.1 I, accumulated in a fixed order so the result does
// not depend on how the linear algebra backend vectorizes products.
Mat random_psd(Rng& rng, std::size_t dim) {
  const auto d = static_cast<Eigen::Index>(dim);
  Mat M(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) M(i, j) = rng.normal();
  }
  Mat Q(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = i; j < d; ++j) {
      double acc = 0.0;
      for (Eigen::Index k = 0; k < d; ++k) acc += M(i, k) * M(j, k);
      acc /= static_cast<double>(dim);
      if (i == j) acc += 0.1;
      Q(i, j) = acc;
      Q(j, i) = acc;
    }
  }
  return Q;
}

}  // namespace

Instance generate_random(std::uint64_t seed, std::size_t n, std::size_t m) {
  if (n == 0 || m == 0) fail("generate_random needs n >= 1 and m >= 1");
  const auto ni = static_cast<Eigen::Index>(n);
  const auto mi = static_cast<Eigen::Index>(m);
  Rng rng(seed);

  NashCournotParams p;
  p.n = n;
  p.m = m;
  p.alpha = 10.0;
  p.beta = 0.125;
  p.c.resize(ni, mi);
  for (Eigen::Index j = 0; j < ni; ++j) {
    for (Eigen::Index i = 0; i < mi; ++i) p.c(j, i) = rng.uniform_open();
  }
  p.eta = Vec::Constant(ni, 5.0);
  p.xi = Vec::Constant(mi, 5.0);

  p.objective.Q1 = random_psd(rng, n);
  p.objective.Q2 = random_psd(rng, m);
  p.objective.q1.resize(ni);
  for (Eigen::Index j = 0; j < ni; ++j) p.objective.q1[j] = rng.uniform(-1.0, 1.0);
  p.objective.q2.resize(mi);
  for (Eigen::Index i = 0; i < mi; ++i) p.objective.q2[i] = rng.uniform(-1.0, 1.0);

  return build_nash_cournot(p);
}

double eval_objective(const Instance& inst, const Vec& x, const Vec& y) {
  if (static_cast<std::size_t>(x.size()) != inst.n || static_cast<std::size_t>(y.size()) != inst.m) {
    fail("eval_objective: dimension mismatch");
  }
  return inst.objective.value(x, y);
}

}  // namespace ampec
