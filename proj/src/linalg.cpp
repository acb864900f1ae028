#include "netwave/linalg.hpp"

#include <Eigen/SVD>
#include <limits>

namespace netwave {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

double rank_threshold(const Eigen::VectorXd& sv, int rows, int cols) {
  if (sv.size() == 0) return 0.0;
  return std::max(rows, cols) * kEps * sv(0);
}

}  // namespace

bool is_exactly_real(const Matrix& a) {
  for (Eigen::Index j = 0; j < a.cols(); ++j)
    for (Eigen::Index i = 0; i < a.rows(); ++i)
      if (a(i, j).imag() != 0.0) return false;
  return true;
}

int numeric_rank(const Matrix& a) {
  if (a.rows() == 0 || a.cols() == 0) return 0;
  Eigen::JacobiSVD<Matrix> svd(a);
  const auto& sv = svd.singularValues();
  const double thr = rank_threshold(sv, int(a.rows()), int(a.cols()));
  int r = 0;
  while (r < sv.size() && sv(r) > thr) ++r;
  return r;
}

double rank_margin(const Matrix& a, int claimed_rank) {
  if (a.rows() == 0 || a.cols() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(a);
  const auto& sv = svd.singularValues();
  const double thr = rank_threshold(sv, int(a.rows()), int(a.cols()));
  // decisive singular value: the smallest kept one if full claimed rank,
  // else the first dropped one.
  if (claimed_rank <= 0) return sv.size() ? thr - sv(0) : 0.0;
  if (claimed_rank > sv.size()) return 0.0;
  return sv(claimed_rank - 1) - thr;
}

namespace {

// SVD-based basis extraction with a real fast path: real inputs yield bases
// whose imaginary parts are exactly zero.
Matrix left_singular_cols(const Matrix& a, bool complement) {
  const Eigen::Index n = a.rows();
  if (a.cols() == 0) {
    if (!complement) return Matrix(n, 0);
    return Matrix::Identity(n, n);
  }
  if (is_exactly_real(a)) {
    RealMatrix ar = a.real();
    Eigen::JacobiSVD<RealMatrix> svd(ar, Eigen::ComputeFullU);
    const auto& sv = svd.singularValues();
    const double thr = rank_threshold(sv, int(a.rows()), int(a.cols()));
    int r = 0;
    while (r < sv.size() && sv(r) > thr) ++r;
    RealMatrix u = complement ? RealMatrix(svd.matrixU().rightCols(n - r))
                              : RealMatrix(svd.matrixU().leftCols(r));
    Matrix out(u.rows(), u.cols());
    out.real() = u;
    out.imag().setZero();
    return out;
  }
  Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeFullU);
  const auto& sv = svd.singularValues();
  const double thr = rank_threshold(sv, int(a.rows()), int(a.cols()));
  int r = 0;
  while (r < sv.size() && sv(r) > thr) ++r;
  if (complement) return svd.matrixU().rightCols(n - r);
  return svd.matrixU().leftCols(r);
}

}  // namespace

Matrix orthonormal_basis(const Matrix& a) { return left_singular_cols(a, false); }

Matrix orthonormal_complement(const Matrix& a) { return left_singular_cols(a, true); }

int intersection_dim(const Matrix& a, const Matrix& b) {
  const int ra = numeric_rank(a);
  const int rb = numeric_rank(b);
  if (ra == 0 || rb == 0) return 0;
  Matrix ab(a.rows(), a.cols() + b.cols());
  ab << orthonormal_basis(a), orthonormal_basis(b);
  return ra + rb - numeric_rank(ab);
}

double subspace_distance(const Matrix& a, const Matrix& b) {
  Matrix qa = orthonormal_basis(a);
  Matrix qb = orthonormal_basis(b);
  double res = 0.0;
  if (qa.cols() > 0) res = std::max(res, (qa - qb * (qb.adjoint() * qa)).norm());
  if (qb.cols() > 0) res = std::max(res, (qb - qa * (qa.adjoint() * qb)).norm());
  return res;
}

Vector project_onto(const Matrix& basis, const Vector& v) {
  Matrix q = orthonormal_basis(basis);
  if (q.cols() == 0) return Vector::Zero(v.size());
  return q * (q.adjoint() * v);
}

double hermiticity_residual(const Matrix& a) { return (a - a.adjoint()).norm(); }

void hermitian_eigen_range(const Matrix& a, double& lambda_min, double& lambda_max) {
  Matrix h = 0.5 * (a + a.adjoint());
  if (h.rows() == 0) {
    lambda_min = lambda_max = 0.0;
    return;
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(h, Eigen::EigenvaluesOnly);
  lambda_min = es.eigenvalues().minCoeff();
  lambda_max = es.eigenvalues().maxCoeff();
}

}  // namespace netwave
