#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "netwave/types.hpp"

namespace netwave {

struct System;

/// Matrix-valued polynomial x -> sum_j A_j x^j with square coefficient
/// matrices. Input coefficients are restricted to degree <= 3; products
/// (needed for Q*M) may carry higher degree internally.
class MatrixPolynomial {
public:
  MatrixPolynomial() = default;
  explicit MatrixPolynomial(std::vector<Matrix> coefficients);
  static MatrixPolynomial constant(const Matrix& a) { return MatrixPolynomial({a}); }

  int dim() const { return coeffs_.empty() ? 0 : int(coeffs_[0].rows()); }
  int degree() const;  // after trimming exactly-zero leading coefficients
  bool is_constant() const { return degree() == 0; }
  bool is_exactly_real() const;

  Matrix eval(double x) const;
  MatrixPolynomial derivative() const;
  MatrixPolynomial operator*(const MatrixPolynomial& rhs) const;

  const std::vector<Matrix>& coefficients() const { return coeffs_; }

private:
  std::vector<Matrix> coeffs_;
};

/// Per-edge coefficient fields. Q may be absent on input; the validation
/// pipeline synthesizes it for constant M and rejects variable M without Q.
struct EdgeCoefficients {
  MatrixPolynomial M;
  MatrixPolynomial N;
  std::optional<MatrixPolynomial> Q;
  bool q_synthesized = false;

  const MatrixPolynomial& q() const;
  /// Exact product Q*M as a polynomial.
  MatrixPolynomial qm() const { return q() * M; }
};

struct PointWitness {
  double x = 0.0;
  double value = 0.0;
};

struct EdgeAssumptionReport {
  bool m_invertible = false;
  bool q_hermitian = false;
  bool qm_hermitian = false;
  bool q_uniformly_positive = false;
  PointWitness m_invertible_witness;    // worst (smallest) singular value of M
  PointWitness q_hermitian_witness;     // worst Hermiticity residual of Q
  PointWitness qm_hermitian_witness;    // worst Hermiticity residual of QM
  PointWitness q_positivity_witness;    // worst lambda_min of (Q+Q*)/2
  double uniform_positivity_constant = 0.0;  // the constant q > 0
  bool passed() const {
    return m_invertible && q_hermitian && qm_hermitian && q_uniformly_positive;
  }
};

struct AssumptionReport {
  std::vector<EdgeAssumptionReport> edges;
  bool passed() const {
    for (const auto& e : edges)
      if (!e.passed()) return false;
    return true;
  }
  std::string describe(const System& sys) const;
};

/// Evaluation bundle returned by eval_coeffs: the derivative (QM)' comes from
/// the exact polynomial product rule, never finite differences.
struct CoefficientValues {
  Matrix M, N, Q, QM_prime;
};

/// Sample points used for pointwise checks: n Chebyshev-distributed points
/// plus both endpoints of [0, length].
std::vector<double> sample_points(double length, int n = 64);

CoefficientValues eval_coeffs(const EdgeCoefficients& edge, double length, double x);

/// Pointwise verification of the standing assumptions on every edge.
/// Failures are recorded in the report; callers treat them as fatal.
AssumptionReport check_assumptions(const System& sys);

/// Symmetrizer synthesis for a constant coefficient matrix: eigendecompose
/// M = S^-1 D S; when all eigenvalues are real and nonzero return Q = S* S.
/// Throws for complex or zero eigenvalues and for defective M.
Matrix synthesize_symmetrizer(const Matrix& M, const Tolerances& tol = {});

/// Least-squares polynomial fit of a scalar function on [0, length], used to
/// enter non-polynomial model coefficients as degree <= 3 polynomials.
std::vector<double> fit_scalar_polynomial(const std::function<double(double)>& f,
                                          double length, int degree);

}  // namespace netwave
