#pragma once

#include <functional>

#include "netwave/system.hpp"

namespace netwave {

enum class Scheme { CharacteristicUpwind, LocalLaxFriedrichs };

Scheme scheme_from_string(const std::string& s);
const char* to_string(Scheme s);

struct SimConfig {
  double cells_per_unit = 400.0;
  double cfl = 0.45;  // in (0, 1]
  double t_final = 1.0;
  int output_stride = 1;
  Scheme scheme = Scheme::CharacteristicUpwind;
  bool probe_positivity = true;
  bool probe_reality = true;

  static SimConfig from_section(const SimSection& s);
};

/// Initial datum: per-edge vector value at position x along the edge.
using InitialData = std::function<Vector(int edge, double x)>;

/// Builds an InitialData callable from a named profile; positions are
/// interpreted relative to each edge's length.
InitialData make_initial(const System& sys, const InitialSpec& spec);

struct EdgeState {
  int cells = 0;
  double dx = 0.0;
  std::vector<Vector> u;  // cell averages
  Vector ghost_left, ghost_right;

  // precomputed fields
  std::vector<Matrix> N_at;  // N(x_i)
  std::vector<Matrix> M_at;  // M(x_i), Lax-Friedrichs path
  std::vector<Matrix> Q_at;  // Q(x_i), energy quadrature
  Matrix W, Winv;            // M = W diag(speeds) W^-1, upwind path
  RealVector speeds;
  double rho = 0.0;  // max sampled spectral radius of M
};

struct SimState {
  const System* sys = nullptr;
  SimConfig cfg;
  std::vector<EdgeState> edges;
  double time = 0.0;
  double last_projection_residual = 0.0;

  std::vector<Matrix> Y_local;  // orthonormal bases, local conditions
  Matrix Y_global;              // orthonormal basis, global conditions
};

struct TimeSeries {
  std::vector<double> t;
  std::vector<double> energy;
  std::vector<double> boundary_residual;
  std::vector<double> min_real;
  std::vector<double> max_imag;
};

SimState discretize(const System& sys, const SimConfig& cfg, const InitialData& init);

/// Enforces the boundary set: provisional traces are linearly extrapolated to
/// the endpoints, replaced by their orthogonal projection onto the boundary
/// space, and ghost values are set so the reconstructed face value equals the
/// projected trace (ghost = 2*projected - interior).
void project_traces(SimState& state);

/// One Heun step of the semi-discrete system; dt must respect the CFL bound
/// cfl * min_e(dx_e / rho_e).
void step(SimState& state, double dt);

double cfl_time_step(const SimState& state);
double energy(const SimState& state);
double min_real_part(const SimState& state);
double max_imag_part(const SimState& state);

TimeSeries run(const System& sys, const SimConfig& cfg, const InitialData& init);

/// Drives a prepared state to cfg.t_final, recording every output_stride
/// steps. Exposed so callers can keep the final state for snapshots.
TimeSeries run_state(SimState& state);

}  // namespace netwave
