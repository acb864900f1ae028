#include "netwave/boundary.hpp"

#include <Eigen/LU>

#include "netwave/linalg.hpp"

namespace netwave {

int global_slot_offset(const MetricGraph& g, const TraceSlot& slot) {
  const int base = g.edge_offset(slot.edge);
  return slot.end == Endpoint::Tail ? base : g.total_dim() + base;
}

namespace {

Matrix endpoint_block(const System& sys, const TraceSlot& slot) {
  const EdgeCoefficients& c = sys.coefficients[slot.edge];
  const double len = sys.graph.edge(slot.edge).length;
  const double x = slot.end == Endpoint::Tail ? 0.0 : len;
  const double iota = slot.end == Endpoint::Tail ? -1.0 : +1.0;
  Matrix qm = c.qm().eval(x);
  qm = 0.5 * (qm + qm.adjoint());  // exact Hermitian assembly
  return iota * qm;
}

}  // namespace

Matrix vertex_form_matrix(const System& sys, int v) {
  const MetricGraph& g = sys.graph;
  const int kv = g.vertex_dim(v);
  Matrix T = Matrix::Zero(kv, kv);
  for (const TraceSlot& slot : g.vertex_slots(v)) {
    const int ke = g.edge(slot.edge).block_size;
    T.block(slot.offset, slot.offset, ke, ke) = endpoint_block(sys, slot);
  }
  return T;
}

Matrix global_form_matrix(const System& sys) {
  const MetricGraph& g = sys.graph;
  const int k = g.total_dim();
  Matrix T = Matrix::Zero(2 * k, 2 * k);
  for (int e = 0; e < g.num_edges(); ++e) {
    const int ke = g.edge(e).block_size;
    const int off = g.edge_offset(e);
    const EdgeCoefficients& c = sys.coefficients[e];
    Matrix qm0 = c.qm().eval(0.0);
    Matrix qml = c.qm().eval(g.edge(e).length);
    T.block(off, off, ke, ke) = -0.5 * (qm0 + qm0.adjoint());
    T.block(k + off, k + off, ke, ke) = 0.5 * (qml + qml.adjoint());
  }
  return T;
}

namespace {

// Zero-padded extension of one orthocomplement vector to C^k; self-loop slots
// accumulate into the same edge block.
Matrix tilde_extension(const System& sys, int v, const Matrix& Wv) {
  const MetricGraph& g = sys.graph;
  Matrix out = Matrix::Zero(g.total_dim(), Wv.cols());
  for (const TraceSlot& slot : g.vertex_slots(v)) {
    const int ke = g.edge(slot.edge).block_size;
    out.middleRows(g.edge_offset(slot.edge), ke) +=
        Wv.middleRows(slot.offset, ke);
  }
  return out;
}

}  // namespace

LocalDimensionReport check_local_dimension_condition(const System& sys) {
  if (!sys.has_local())
    throw Error("boundary: local boundary conditions are not present");
  const MetricGraph& g = sys.graph;
  LocalDimensionReport rep;
  rep.k = g.total_dim();

  std::vector<Matrix> tilde(g.num_vertices());
  int total_cols = 0;
  for (int v = 0; v < g.num_vertices(); ++v) {
    const Matrix& Y = sys.local->Y[v];
    rep.dim_sum += int(Y.cols());
    Matrix Wv = orthonormal_complement(Y);
    tilde[v] = tilde_extension(sys, v, Wv);
    total_cols += int(tilde[v].cols());
  }
  rep.dims_ok = (rep.dim_sum == rep.k);

  Matrix stacked(rep.k, total_cols);
  int col = 0;
  for (const Matrix& t : tilde) {
    stacked.middleCols(col, t.cols()) = t;
    col += int(t.cols());
  }
  rep.stacked_rank = numeric_rank(stacked);
  rep.independent = (rep.stacked_rank == rep.k);
  rep.margin = rank_margin(stacked, rep.stacked_rank);

  if (!rep.independent) {
    for (int v = 0; v < g.num_vertices() && !rep.violating_pair; ++v)
      for (int w = v + 1; w < g.num_vertices(); ++w)
        if (tilde[v].cols() > 0 && tilde[w].cols() > 0 &&
            intersection_dim(tilde[v], tilde[w]) > 0) {
          rep.violating_pair = {g.vertex_id(v), g.vertex_id(w)};
          break;
        }
  }
  return rep;
}

Matrix adjoint_bc_space(const System& sys, int v) {
  if (!sys.has_local())
    throw Error("boundary: local boundary conditions are not present");
  Matrix T = vertex_form_matrix(sys, v);
  Matrix W = orthonormal_complement(sys.local->Y[v]);
  if (W.cols() == 0) return Matrix(T.rows(), 0);
  Matrix X;
  if (is_exactly_real(T) && is_exactly_real(W)) {
    RealMatrix Xr = T.real().partialPivLu().solve(W.real());
    X = Matrix(Xr.rows(), Xr.cols());
    X.real() = Xr;
    X.imag().setZero();
  } else {
    X = T.partialPivLu().solve(W);
  }
  return orthonormal_basis(X);
}

Matrix k_diagonal_basis(int k) {
  Matrix K = Matrix::Zero(2 * k, k);
  const double s = 1.0 / std::sqrt(2.0);
  for (int i = 0; i < k; ++i) {
    K(i, i) = s;
    K(k + i, i) = s;
  }
  return K;
}

GlobalConditionReport check_global_conditions(const System& sys, const Matrix& Y) {
  const MetricGraph& g = sys.graph;
  const int k = g.total_dim();
  if (int(Y.rows()) != 2 * k)
    throw Error("boundary: global Y must live in C^(2k)");

  GlobalConditionReport rep;
  rep.k = k;
  rep.dim_Y = numeric_rank(Y);
  Matrix Yperp = orthonormal_complement(Y);
  rep.dim_Yperp = int(Yperp.cols());
  rep.dim_ok = (rep.dim_Yperp == k);

  rep.intersection_with_K = (rep.dim_Y == 0) ? 0 : intersection_dim(Y, k_diagonal_basis(k));
  rep.basis_global = rep.dim_ok && rep.intersection_with_K == 0;
  {
    // margin of the intersection test: smallest singular value story of the
    // concatenated bases is already captured by rank_margin on [Y K].
    Matrix yk(2 * k, rep.dim_Y + k);
    yk << orthonormal_basis(Y), k_diagonal_basis(k);
    rep.margin_basis = rank_margin(yk, numeric_rank(yk));
  }

  // Endpoint fallback applicability: every edge diagonal, or constant
  // Hermitian positive definite.
  rep.infty_applicable = true;
  for (int e = 0; e < g.num_edges() && rep.infty_applicable; ++e) {
    const EdgeCoefficients& c = sys.coefficients[e];
    const double len = g.edge(e).length;
    bool diagonal = true;
    double scale = 0.0;
    for (double x : sample_points(len))
      scale = std::max(scale, c.M.eval(x).norm());
    for (double x : sample_points(len)) {
      Matrix M = c.M.eval(x);
      Matrix offdiag = M - Matrix(M.diagonal().asDiagonal());
      if (offdiag.norm() > sys.tol.check_rel * std::max(1.0, scale)) {
        diagonal = false;
        break;
      }
    }
    if (diagonal) continue;
    bool const_spd = c.M.is_constant();
    if (const_spd) {
      Matrix M = c.M.eval(0.0);
      if (hermiticity_residual(M) > sys.tol.herm_rel * std::max(1.0, M.norm()))
        const_spd = false;
      else {
        double lmin, lmax;
        hermitian_eigen_range(M, lmin, lmax);
        const_spd = lmin > sys.tol.zero_rel * std::max(1.0, M.norm());
      }
    }
    rep.infty_applicable = const_spd;
  }

  Matrix pi_ell = Yperp.bottomRows(k);
  rep.pi_ell_rank = numeric_rank(pi_ell);
  rep.margin_infty = rank_margin(pi_ell, rep.pi_ell_rank);
  rep.basis_global_infty = rep.dim_ok && rep.pi_ell_rank == k;
  return rep;
}

Matrix assemble_global_from_local(const System& sys) {
  if (!sys.has_local())
    throw Error("boundary: local boundary conditions are not present");
  const MetricGraph& g = sys.graph;
  const int k2 = 2 * g.total_dim();
  int total_cols = 0;
  std::vector<Matrix> embedded(g.num_vertices());
  for (int v = 0; v < g.num_vertices(); ++v) {
    Matrix Wv = orthonormal_complement(sys.local->Y[v]);
    Matrix E = Matrix::Zero(k2, Wv.cols());
    for (const TraceSlot& slot : g.vertex_slots(v)) {
      const int ke = g.edge(slot.edge).block_size;
      E.middleRows(global_slot_offset(g, slot), ke) = Wv.middleRows(slot.offset, ke);
    }
    embedded[v] = E;
    total_cols += int(E.cols());
  }
  Matrix Wall(k2, total_cols);
  int col = 0;
  for (const Matrix& E : embedded) {
    Wall.middleCols(col, E.cols()) = E;
    col += int(E.cols());
  }
  return orthonormal_complement(Wall);
}

}  // namespace netwave
