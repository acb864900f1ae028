#pragma once

// Random well-formed systems with isotropic local boundary conditions, shared
// by the boundary/classifier tests and the acceptance suite.

#include <random>

#include "netwave/boundary.hpp"
#include "netwave/forms.hpp"
#include "netwave/system.hpp"

namespace netwave::testing {

inline Matrix random_complex(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Matrix m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = Complex(g(rng), g(rng));
  return m;
}

// Real-diagonalizable M with symmetrizer Q = S* S, so QM = S* D S is
// Hermitian and Q is positive definite by construction.
inline EdgeCoefficients random_edge_coefficients(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> mag(0.3, 2.0);
  Matrix s;
  do {
    s = random_complex(n, rng);
  } while (std::abs(s.determinant()) < 0.2);
  Vector d(n);
  for (int i = 0; i < n; ++i) d(i) = (rng() % 2 ? 1.0 : -1.0) * mag(rng);
  Matrix m = s.inverse() * d.asDiagonal() * s;
  Matrix q = s.adjoint() * s;
  q = 0.5 * (q + q.adjoint());
  return {MatrixPolynomial::constant(m),
          MatrixPolynomial::constant(random_complex(n, rng)),
          MatrixPolynomial::constant(q)};
}

inline MetricGraph random_graph(std::mt19937_64& rng, bool allow_self_loops = true) {
  const int nv = 2 + int(rng() % 3);
  const int ne = 2 + int(rng() % 4);
  std::vector<EdgeSpec> edges;
  for (int e = 0; e < ne; ++e) {
    int a = int(rng() % nv);
    int b = int(rng() % nv);
    if (!allow_self_loops && a == b) b = (b + 1) % nv;
    edges.push_back({"e" + std::to_string(e), "v" + std::to_string(a),
                     "v" + std::to_string(b), 0.5 + double(rng() % 100) / 50.0,
                     1 + int(rng() % 2)});
  }
  return MetricGraph::build(edges);
}

// Random subspace of the maximal totally isotropic space of T_v.
inline Matrix random_isotropic_subspace(const Matrix& T, std::mt19937_64& rng) {
  HermitianForm f = HermitianForm::validate(T);
  Matrix iso = max_totally_isotropic_basis(f);
  if (iso.cols() == 0) return Matrix(T.rows(), 0);
  Matrix u = random_complex(int(iso.cols()), rng);
  Eigen::HouseholderQR<Matrix> qr(u);
  Matrix rot = Matrix(qr.householderQ()) * Matrix::Identity(iso.cols(), iso.cols());
  const int m = int(rng() % (iso.cols() + 1));
  return Matrix(iso * rot).leftCols(m);
}

inline System random_isotropic_system(std::mt19937_64& rng) {
  System sys;
  sys.graph = random_graph(rng);
  for (int e = 0; e < sys.graph.num_edges(); ++e)
    sys.coefficients.push_back(
        random_edge_coefficients(sys.graph.edge(e).block_size, rng));
  LocalBoundary lb;
  lb.Y.resize(sys.graph.num_vertices());
  for (int v = 0; v < sys.graph.num_vertices(); ++v)
    lb.Y[v] = random_isotropic_subspace(vertex_form_matrix(sys, v), rng);
  sys.local = std::move(lb);
  return sys;
}

}  // namespace netwave::testing
