#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "netwave/coefficients.hpp"
#include "netwave/graph.hpp"

namespace netwave {

/// Local boundary conditions: one subspace basis per vertex, in the vertex
/// trace layout of MetricGraph::vertex_slots. Columns span Y_v; a k_v x 0
/// matrix means the zero subspace. The raw user basis is kept verbatim;
/// modules orthonormalize internally and never mutate it.
struct LocalBoundary {
  std::vector<Matrix> Y;  // indexed by vertex
};

/// Global boundary condition: a subspace of C^{2k} in the layout
/// (u_e(0) blocks by edge order, then u_e(length) blocks by edge order).
struct GlobalBoundary {
  Matrix Y;
};

/// Named initial-data profile, evaluated at cell centers by the simulator.
/// `components` selects which entries of the per-edge vector get the profile;
/// empty means all. Remaining entries are zero.
struct InitialSpec {
  std::string kind = "gaussian";  // gaussian | sine | constant | zero
  double amplitude = 1.0;
  double width = 0.1;
  double center = 0.5;
  double offset = 0.0;
  std::vector<int> components;
};

struct SimSection {
  double cells_per_unit = 400.0;
  double cfl = 0.45;
  double t_final = 1.0;
  int output_stride = 1;
  std::string scheme = "characteristic_upwind";
  InitialSpec initial;
};

struct System {
  MetricGraph graph;
  std::vector<EdgeCoefficients> coefficients;  // by edge index
  std::optional<LocalBoundary> local;
  std::optional<GlobalBoundary> global;
  Tolerances tol;
  std::optional<SimSection> simulation;
  std::vector<std::string> notes;  // free-form remarks surfaced in reports

  bool has_local() const { return local.has_value(); }
  bool has_global() const { return global.has_value(); }
};

/// Structural validation: coefficient dimensions match block sizes, degrees
/// are <= 3, exactly one boundary flavor is present with consistent shapes
/// and full column rank, and missing symmetrizers are synthesized (constant
/// M only; variable M without Q is an error).
void validate_system(System& sys);

}  // namespace netwave
