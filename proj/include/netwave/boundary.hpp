#pragma once

#include <optional>
#include <utility>

#include "netwave/forms.hpp"
#include "netwave/system.hpp"

namespace netwave {

/// Global position of a trace slot inside C^{2k}: tail slots index the u(0)
/// half, head slots the u(length) half.
int global_slot_offset(const MetricGraph& g, const TraceSlot& slot);

/// Vertex form matrix T_v: block-diagonal over the vertex trace slots with
/// blocks iota * (QM)(endpoint), Hermitianized blockwise. Requires the
/// assumptions to hold; a singular block is an internal inconsistency.
Matrix vertex_form_matrix(const System& sys, int v);

/// The 2k x 2k form diag(-QM(0) blocks, +QM(length) blocks) in edge order.
Matrix global_form_matrix(const System& sys);

/// Verdict of the local dimension/independence condition: the zero-padded
/// orthocomplements must sum directly to C^k and the dimensions of the Y_v
/// must sum to k. At a self-loop the tail and head blocks of an
/// orthocomplement vector add into the same edge block.
struct LocalDimensionReport {
  bool dims_ok = false;     // sum of dim Y_v == k
  int dim_sum = 0;
  int k = 0;
  bool independent = false; // stacked orthocomplement rank == k
  int stacked_rank = 0;
  double margin = 0.0;      // distance of the decisive singular value from the cutoff
  std::optional<std::pair<std::string, std::string>> violating_pair;
  // a vertex pair whose zero-padded orthocomplements overlap
  bool ok() const { return dims_ok && independent; }
};

LocalDimensionReport check_local_dimension_condition(const System& sys);

/// Orthonormal basis of T_v^{-1} Y_v^perp, the trace space of the adjoint
/// boundary conditions. Dimension is k_v - dim Y_v.
Matrix adjoint_bc_space(const System& sys, int v);

struct GlobalConditionReport {
  int k = 0;
  int dim_Y = 0;
  int dim_Yperp = 0;
  bool dim_ok = false;          // dim Y^perp == k
  int intersection_with_K = 0;  // dim(Y n K), K = {(a, a)}
  bool basis_global = false;    // dim_ok and Y n K = {0}
  bool infty_applicable = false;
  int pi_ell_rank = 0;          // rank of the u(length) half of Y^perp
  bool basis_global_infty = false;
  double margin_basis = 0.0;
  double margin_infty = 0.0;
};

/// Evaluates the global well-posedness conditions for a subspace Y of C^{2k}.
/// The endpoint fallback is reported as applicable only when every edge has
/// M diagonal at all sample points, or constant Hermitian positive definite.
GlobalConditionReport check_global_conditions(const System& sys, const Matrix& Y);

/// Assembles the global subspace equivalent to the local conditions: the
/// global orthocomplement is spanned by the slot-embedded Y_v^perp bases.
Matrix assemble_global_from_local(const System& sys);

/// Orthonormal basis of K = {(a, a) : a in C^k} inside C^{2k}.
Matrix k_diagonal_basis(int k);

}  // namespace netwave
