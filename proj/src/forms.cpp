#include "netwave/forms.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

#include "netwave/linalg.hpp"

namespace netwave {

namespace {

struct EigenData {
  Eigen::VectorXd values;  // ascending
  Matrix vectors;
};

EigenData hermitian_eigen(const HermitianForm& form) {
  // Real symmetric input keeps an exactly-real eigenbasis.
  if (is_exactly_real(form.P)) {
    Eigen::SelfAdjointEigenSolver<RealMatrix> es(form.P.real());
    if (es.info() != Eigen::Success) throw Error("forms: eigensolver failed");
    EigenData d;
    d.values = es.eigenvalues();
    d.vectors = Matrix(form.P.rows(), form.P.cols());
    d.vectors.real() = es.eigenvectors();
    d.vectors.imag().setZero();
    return d;
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(form.P);
  if (es.info() != Eigen::Success) throw Error("forms: eigensolver failed");
  return {es.eigenvalues(), es.eigenvectors()};
}

Signature signature_of(const EigenData& d, double zero_tol) {
  Signature s;
  for (Eigen::Index i = 0; i < d.values.size(); ++i) {
    const double lam = d.values(i);
    if (lam < -zero_tol)
      ++s.negative;
    else if (lam > zero_tol)
      ++s.positive;
    else
      throw Error("forms: eigenvalue " + std::to_string(lam) +
                  " within the zero threshold; form is numerically singular");
  }
  return s;
}

}  // namespace

const char* to_string(ConeClass c) {
  switch (c) {
    case ConeClass::Null: return "null";
    case ConeClass::Nonpositive: return "nonpositive";
    case ConeClass::Nonnegative: return "nonnegative";
    default: return "indefinite";
  }
}

HermitianForm HermitianForm::validate(const Matrix& P, const Tolerances& tol) {
  if (P.rows() != P.cols()) throw Error("forms: matrix is not square");
  if (P.rows() == 0) throw Error("forms: empty matrix");
  HermitianForm f;
  f.P = P;
  f.norm = P.norm();
  if (hermiticity_residual(P) > tol.herm_rel * std::max(1.0, f.norm))
    throw Error("forms: matrix is not Hermitian within tolerance");
  // Invertibility is re-checked against eigenvalues in signature(); a cheap
  // smallest-singular-value gate catches gross violations early.
  Eigen::JacobiSVD<Matrix> svd(P);
  if (svd.singularValues().minCoeff() <= tol.zero_rel * f.norm)
    throw Error("forms: matrix is numerically singular");
  return f;
}

Signature signature(const HermitianForm& form, const Tolerances& tol) {
  return signature_of(hermitian_eigen(form), tol.zero_rel * form.norm);
}

int isotropy_index(const HermitianForm& form, const Tolerances& tol) {
  Signature s = signature(form, tol);
  return std::min(s.negative, s.positive);
}

Matrix max_totally_isotropic_basis(const HermitianForm& form, const Tolerances& tol,
                                   const std::vector<bool>& flip) {
  EigenData d = hermitian_eigen(form);
  Signature s = signature_of(d, tol.zero_rel * form.norm);
  const int kappa = std::min(s.negative, s.positive);
  const Eigen::Index n = form.P.rows();
  Matrix basis(n, kappa);
  for (int i = 0; i < kappa; ++i) {
    const double lam_neg = d.values(i);              // < 0
    const double lam_pos = d.values(s.negative + i); // > 0
    double alpha = std::sqrt(-lam_neg / lam_pos);
    if (i < int(flip.size()) && flip[i]) alpha = -alpha;
    basis.col(i) = d.vectors.col(i) + alpha * d.vectors.col(s.negative + i);
  }
  if (kappa > 0) {
    const double res = (basis.adjoint() * form.P * basis).norm();
    if (res > tol.iso_rel * std::max(1.0, form.norm))
      throw Error("forms: constructed isotropic basis failed verification");
  }
  return basis;
}

ConeReport classify_subspace(const HermitianForm& form, const Matrix& B,
                             const Tolerances& tol) {
  if (B.rows() != form.P.rows())
    throw Error("forms: subspace basis dimension mismatch");
  ConeReport r;
  if (B.cols() == 0) {
    r.cls = ConeClass::Null;
    r.restricted = Matrix(0, 0);
    return r;
  }
  Matrix q = orthonormal_basis(B);
  r.restricted = q.adjoint() * form.P * q;
  hermitian_eigen_range(r.restricted, r.lambda_min, r.lambda_max);
  const double iso = tol.iso_rel * std::max(1.0, form.norm);
  if (r.restricted.norm() <= iso)
    r.cls = ConeClass::Null;
  else if (r.lambda_max <= iso)
    r.cls = ConeClass::Nonpositive;
  else if (r.lambda_min >= -iso)
    r.cls = ConeClass::Nonnegative;
  else
    r.cls = ConeClass::Indefinite;
  return r;
}

int max_nonpositive_dim(const HermitianForm& form, const Tolerances& tol) {
  return signature(form, tol).negative;
}

Matrix nonpositive_witness(const HermitianForm& form, const Tolerances& tol) {
  EigenData d = hermitian_eigen(form);
  Signature s = signature_of(d, tol.zero_rel * form.norm);
  return d.vectors.leftCols(s.negative);
}

}  // namespace netwave
