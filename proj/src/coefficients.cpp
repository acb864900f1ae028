#include "netwave/coefficients.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <cmath>
#include <numbers>
#include <sstream>

#include "netwave/linalg.hpp"
#include "netwave/system.hpp"

namespace netwave {

MatrixPolynomial::MatrixPolynomial(std::vector<Matrix> coefficients)
    : coeffs_(std::move(coefficients)) {
  if (coeffs_.empty()) throw Error("coefficients: empty polynomial");
  const Eigen::Index n = coeffs_[0].rows();
  for (const auto& a : coeffs_)
    if (a.rows() != n || a.cols() != n)
      throw Error("coefficients: polynomial coefficients must be square of equal size");
}

int MatrixPolynomial::degree() const {
  int d = int(coeffs_.size()) - 1;
  while (d > 0 && coeffs_[d].norm() == 0.0) --d;
  return d;
}

bool MatrixPolynomial::is_exactly_real() const {
  for (const auto& a : coeffs_)
    if (!netwave::is_exactly_real(a)) return false;
  return true;
}

Matrix MatrixPolynomial::eval(double x) const {
  Matrix acc = coeffs_.back();
  for (int j = int(coeffs_.size()) - 2; j >= 0; --j) acc = acc * x + coeffs_[j];
  return acc;
}

MatrixPolynomial MatrixPolynomial::derivative() const {
  if (coeffs_.size() == 1)
    return MatrixPolynomial({Matrix::Zero(dim(), dim())});
  std::vector<Matrix> d;
  d.reserve(coeffs_.size() - 1);
  for (size_t j = 1; j < coeffs_.size(); ++j) d.push_back(double(j) * coeffs_[j]);
  return MatrixPolynomial(std::move(d));
}

MatrixPolynomial MatrixPolynomial::operator*(const MatrixPolynomial& rhs) const {
  if (dim() != rhs.dim()) throw Error("coefficients: polynomial size mismatch");
  std::vector<Matrix> prod(coeffs_.size() + rhs.coeffs_.size() - 1,
                           Matrix::Zero(dim(), dim()));
  for (size_t i = 0; i < coeffs_.size(); ++i)
    for (size_t j = 0; j < rhs.coeffs_.size(); ++j)
      prod[i + j] += coeffs_[i] * rhs.coeffs_[j];
  return MatrixPolynomial(std::move(prod));
}

const MatrixPolynomial& EdgeCoefficients::q() const {
  if (!Q) throw Error("coefficients: symmetrizer Q not available");
  return *Q;
}

std::vector<double> sample_points(double length, int n) {
  std::vector<double> xs;
  xs.reserve(n + 2);
  xs.push_back(0.0);
  for (int j = 0; j < n; ++j) {
    const double theta = std::numbers::pi * (2.0 * j + 1.0) / (2.0 * n);
    xs.push_back(0.5 * length * (1.0 - std::cos(theta)));
  }
  xs.push_back(length);
  return xs;
}

CoefficientValues eval_coeffs(const EdgeCoefficients& edge, double length, double x) {
  if (x < 0.0 || x > length)
    throw Error("coefficients: evaluation point outside [0, length]");
  CoefficientValues v;
  v.M = edge.M.eval(x);
  v.N = edge.N.eval(x);
  v.Q = edge.q().eval(x);
  v.QM_prime = edge.qm().derivative().eval(x);
  return v;
}

AssumptionReport check_assumptions(const System& sys) {
  AssumptionReport report;
  report.edges.resize(sys.coefficients.size());
  for (int e = 0; e < int(sys.coefficients.size()); ++e) {
    const EdgeCoefficients& c = sys.coefficients[e];
    const double len = sys.graph.edge(e).length;
    EdgeAssumptionReport& r = report.edges[e];
    MatrixPolynomial qm = c.qm();

    double m_scale = 0.0, q_scale = 0.0, qm_scale = 0.0;
    const auto xs = sample_points(len);
    for (double x : xs) {
      m_scale = std::max(m_scale, c.M.eval(x).norm());
      q_scale = std::max(q_scale, c.q().eval(x).norm());
      qm_scale = std::max(qm_scale, qm.eval(x).norm());
    }

    r.m_invertible_witness = {0.0, std::numeric_limits<double>::infinity()};
    r.q_positivity_witness = {0.0, std::numeric_limits<double>::infinity()};

    for (double x : xs) {
      Eigen::JacobiSVD<Matrix> svd(c.M.eval(x));
      const double smin = svd.singularValues().minCoeff();
      if (smin < r.m_invertible_witness.value) r.m_invertible_witness = {x, smin};

      const double qres = hermiticity_residual(c.q().eval(x));
      if (qres > r.q_hermitian_witness.value) r.q_hermitian_witness = {x, qres};

      const double qmres = hermiticity_residual(qm.eval(x));
      if (qmres > r.qm_hermitian_witness.value) r.qm_hermitian_witness = {x, qmres};

      double lmin, lmax;
      hermitian_eigen_range(c.q().eval(x), lmin, lmax);
      if (lmin < r.q_positivity_witness.value) r.q_positivity_witness = {x, lmin};
    }

    r.m_invertible = r.m_invertible_witness.value > sys.tol.inv_rel * m_scale;
    r.q_hermitian =
        r.q_hermitian_witness.value <= sys.tol.herm_rel * std::max(1.0, q_scale);
    r.qm_hermitian =
        r.qm_hermitian_witness.value <= sys.tol.herm_rel * std::max(1.0, qm_scale);
    r.uniform_positivity_constant = r.q_positivity_witness.value;
    r.q_uniformly_positive =
        r.uniform_positivity_constant > sys.tol.zero_rel * std::max(1.0, q_scale);
  }
  return report;
}

std::string AssumptionReport::describe(const System& sys) const {
  std::ostringstream os;
  for (int e = 0; e < int(edges.size()); ++e) {
    const auto& r = edges[e];
    if (r.passed()) continue;
    os << "edge '" << sys.graph.edge(e).id << "':";
    if (!r.m_invertible)
      os << " M singular near x=" << r.m_invertible_witness.x
         << " (sigma_min=" << r.m_invertible_witness.value << ")";
    if (!r.q_hermitian)
      os << " Q not Hermitian at x=" << r.q_hermitian_witness.x
         << " (residual=" << r.q_hermitian_witness.value << ")";
    if (!r.qm_hermitian)
      os << " QM not Hermitian at x=" << r.qm_hermitian_witness.x
         << " (residual=" << r.qm_hermitian_witness.value << ")";
    if (!r.q_uniformly_positive)
      os << " Q not uniformly positive at x=" << r.q_positivity_witness.x
         << " (lambda_min=" << r.q_positivity_witness.value << ")";
    os << ";";
  }
  return os.str();
}

Matrix synthesize_symmetrizer(const Matrix& M, const Tolerances& tol) {
  if (M.rows() != M.cols() || M.rows() == 0)
    throw Error("coefficients: symmetrizer synthesis needs a square matrix");
  const double scale = std::max(1.0, M.norm());

  Matrix V;
  Vector lambda;
  if (is_exactly_real(M)) {
    Eigen::EigenSolver<RealMatrix> es(M.real());
    if (es.info() != Eigen::Success)
      throw Error("coefficients: eigensolver failed in symmetrizer synthesis");
    lambda = es.eigenvalues();
    V = es.eigenvectors();
  } else {
    Eigen::ComplexEigenSolver<Matrix> es(M);
    if (es.info() != Eigen::Success)
      throw Error("coefficients: eigensolver failed in symmetrizer synthesis");
    lambda = es.eigenvalues();
    V = es.eigenvectors();
  }

  for (Eigen::Index i = 0; i < lambda.size(); ++i) {
    if (std::abs(lambda(i).imag()) > tol.eig_imag_rel * scale)
      throw Error("coefficients: M has a complex eigenvalue; not hyperbolic");
    if (std::abs(lambda(i)) <= tol.inv_rel * scale)
      throw Error("coefficients: M has a zero eigenvalue; not hyperbolic");
  }

  // Defective M shows up as a poor eigenvector reconstruction.
  Matrix recon = V * lambda.asDiagonal() * V.inverse();
  if ((recon - M).norm() > 1e-8 * scale)
    throw Error("coefficients: M is numerically defective; cannot synthesize Q");

  // Eigenvectors of a real-eigenvalue matrix may carry complex phases; strip
  // them so real M yields a real Q.
  for (Eigen::Index j = 0; j < V.cols(); ++j) {
    Eigen::Index imax = 0;
    V.col(j).cwiseAbs().maxCoeff(&imax);
    Complex ph = V(imax, j) / std::abs(V(imax, j));
    V.col(j) /= ph;
  }
  if ((V.imag()).norm() <= 1e-12 * V.norm()) V.imag().setZero();

  Matrix Q = (V * V.adjoint()).inverse();
  return 0.5 * (Q + Q.adjoint());
}

std::vector<double> fit_scalar_polynomial(const std::function<double(double)>& f,
                                          double length, int degree) {
  if (degree < 0 || degree > 3)
    throw Error("coefficients: fitted polynomial degree must be in [0, 3]");
  const auto xs = sample_points(length, 16);
  RealMatrix A(xs.size(), degree + 1);
  RealVector b(xs.size());
  for (size_t i = 0; i < xs.size(); ++i) {
    double p = 1.0;
    for (int j = 0; j <= degree; ++j) {
      A(i, j) = p;
      p *= xs[i];
    }
    b(i) = f(xs[i]);
  }
  RealVector sol = A.colPivHouseholderQr().solve(b);
  return std::vector<double>(sol.data(), sol.data() + sol.size());
}

}  // namespace netwave
