#include "netwave/simulator.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <numbers>

#include "netwave/boundary.hpp"
#include "netwave/linalg.hpp"

namespace netwave {

Scheme scheme_from_string(const std::string& s) {
  if (s == "characteristic_upwind") return Scheme::CharacteristicUpwind;
  if (s == "local_lax_friedrichs") return Scheme::LocalLaxFriedrichs;
  throw Error("simulator: unknown scheme '" + s +
              "' (expected characteristic_upwind or local_lax_friedrichs)");
}

const char* to_string(Scheme s) {
  return s == Scheme::CharacteristicUpwind ? "characteristic_upwind"
                                           : "local_lax_friedrichs";
}

SimConfig SimConfig::from_section(const SimSection& s) {
  SimConfig c;
  c.cells_per_unit = s.cells_per_unit;
  c.cfl = s.cfl;
  c.t_final = s.t_final;
  c.output_stride = s.output_stride;
  c.scheme = scheme_from_string(s.scheme);
  return c;
}

InitialData make_initial(const System& sys, const InitialSpec& spec) {
  auto profile = [spec](double rel) -> double {
    if (spec.kind == "gaussian") {
      const double z = (rel - spec.center) / spec.width;
      return spec.offset + spec.amplitude * std::exp(-z * z);
    }
    if (spec.kind == "sine")
      return spec.offset + spec.amplitude * std::sin(2.0 * std::numbers::pi * rel);
    if (spec.kind == "constant") return spec.offset + spec.amplitude;
    if (spec.kind == "zero") return 0.0;
    throw Error("simulator: unknown initial profile '" + spec.kind + "'");
  };
  std::vector<int> comps = spec.components;
  const MetricGraph* g = &sys.graph;
  return [profile, comps, g](int edge, double x) {
    const int ke = g->edge(edge).block_size;
    Vector v = Vector::Zero(ke);
    const double rel = x / g->edge(edge).length;
    if (comps.empty()) {
      for (int i = 0; i < ke; ++i) v(i) = profile(rel);
    } else {
      for (int i : comps)
        if (i >= 0 && i < ke) v(i) = profile(rel);
    }
    return v;
  };
}

namespace {

// Eigendecomposition of a constant M through the symmetrizer: QM w = lambda Q w
// is a Hermitian-definite pencil, so the speeds are real and the transform is
// well conditioned. Real inputs keep exactly-real factors.
void characteristic_decomposition(const Matrix& M, const Matrix& Q, EdgeState& es) {
  Matrix qm = Q * M;
  qm = 0.5 * (qm + qm.adjoint());
  Matrix qh = 0.5 * (Q + Q.adjoint());
  if (is_exactly_real(qm) && is_exactly_real(qh)) {
    Eigen::GeneralizedSelfAdjointEigenSolver<RealMatrix> es2(qm.real(), qh.real());
    if (es2.info() != Eigen::Success)
      throw Error("simulator: characteristic decomposition failed");
    es.speeds = es2.eigenvalues();
    es.W = Matrix(M.rows(), M.cols());
    es.W.real() = es2.eigenvectors();
    es.W.imag().setZero();
    RealMatrix winv = es2.eigenvectors().partialPivLu().inverse();
    es.Winv = Matrix(M.rows(), M.cols());
    es.Winv.real() = winv;
    es.Winv.imag().setZero();
  } else {
    Eigen::GeneralizedSelfAdjointEigenSolver<Matrix> es2(qm, qh);
    if (es2.info() != Eigen::Success)
      throw Error("simulator: characteristic decomposition failed");
    es.speeds = es2.eigenvalues();
    es.W = es2.eigenvectors();
    es.Winv = es.W.partialPivLu().inverse();
  }
}

double edge_spectral_radius(const EdgeCoefficients& c, double len) {
  double rho = 0.0;
  for (double x : sample_points(len)) {
    Eigen::ComplexEigenSolver<Matrix> es(c.M.eval(x), false);
    rho = std::max(rho, es.eigenvalues().cwiseAbs().maxCoeff());
  }
  return rho;
}

Vector extrapolate_tail(const EdgeState& es) { return 1.5 * es.u[0] - 0.5 * es.u[1]; }
Vector extrapolate_head(const EdgeState& es) {
  return 1.5 * es.u[es.cells - 1] - 0.5 * es.u[es.cells - 2];
}

// Spatial operator; ghosts must be current.
void apply_operator(const SimState& state, const EdgeState& es,
                    std::vector<Vector>& out) {
  const SimConfig& cfg = state.cfg;
  const int n = es.cells;
  const double inv_dx = 1.0 / es.dx;
  out.resize(n);
  if (cfg.scheme == Scheme::CharacteristicUpwind) {
    // transform to characteristic variables, upwind each component by the
    // sign of its speed (positive speeds pull from the right neighbor)
    std::vector<Vector> w(n + 2);
    w[0] = es.Winv * es.ghost_left;
    for (int i = 0; i < n; ++i) w[i + 1] = es.Winv * es.u[i];
    w[n + 1] = es.Winv * es.ghost_right;
    const int ke = int(es.speeds.size());
    Vector dw(ke);
    for (int i = 0; i < n; ++i) {
      for (int c = 0; c < ke; ++c) {
        if (es.speeds(c) > 0.0)
          dw(c) = es.speeds(c) * (w[i + 2](c) - w[i + 1](c)) * inv_dx;
        else
          dw(c) = es.speeds(c) * (w[i + 1](c) - w[i](c)) * inv_dx;
      }
      out[i] = es.W * dw + es.N_at[i] * es.u[i];
    }
  } else {
    for (int i = 0; i < n; ++i) {
      const Vector& um = (i == 0) ? es.ghost_left : es.u[i - 1];
      const Vector& up = (i == n - 1) ? es.ghost_right : es.u[i + 1];
      out[i] = es.M_at[i] * ((up - um) * (0.5 * inv_dx)) +
               (es.rho * 0.5 * inv_dx) * (up - 2.0 * es.u[i] + um) +
               es.N_at[i] * es.u[i];
    }
  }
}

}  // namespace

SimState discretize(const System& sys, const SimConfig& cfg, const InitialData& init) {
  if (cfg.cfl <= 0.0 || cfg.cfl > 1.0) throw Error("simulator: CFL must be in (0, 1]");
  SimState state;
  state.sys = &sys;
  state.cfg = cfg;
  state.edges.resize(sys.graph.num_edges());
  for (int e = 0; e < sys.graph.num_edges(); ++e) {
    const EdgeCoefficients& c = sys.coefficients[e];
    const double len = sys.graph.edge(e).length;
    EdgeState& es = state.edges[e];
    es.cells = std::max(4, int(std::lround(cfg.cells_per_unit * len)));
    es.dx = len / es.cells;
    es.u.resize(es.cells);
    es.N_at.resize(es.cells);
    es.Q_at.resize(es.cells);
    if (cfg.scheme == Scheme::LocalLaxFriedrichs) es.M_at.resize(es.cells);
    for (int i = 0; i < es.cells; ++i) {
      const double x = (i + 0.5) * es.dx;  // midpoint sampling
      es.u[i] = init(e, x);
      if (int(es.u[i].size()) != sys.graph.edge(e).block_size)
        throw Error("simulator: initial datum has wrong block size on edge '" +
                    sys.graph.edge(e).id + "'");
      es.N_at[i] = c.N.eval(x);
      es.Q_at[i] = c.q().eval(x);
      if (cfg.scheme == Scheme::LocalLaxFriedrichs) es.M_at[i] = c.M.eval(x);
    }
    es.rho = edge_spectral_radius(c, len);
    if (cfg.scheme == Scheme::CharacteristicUpwind) {
      if (!c.M.is_constant())
        throw Error("simulator: characteristic_upwind needs constant M on edge '" +
                    sys.graph.edge(e).id + "'; use local_lax_friedrichs");
      characteristic_decomposition(c.M.eval(0.0), c.q().eval(0.0), es);
    }
    const int ke = sys.graph.edge(e).block_size;
    es.ghost_left = Vector::Zero(ke);
    es.ghost_right = Vector::Zero(ke);
  }
  if (sys.has_local()) {
    for (const Matrix& Y : sys.local->Y)
      state.Y_local.push_back(orthonormal_basis(Y));
  } else {
    state.Y_global = orthonormal_basis(sys.global->Y);
  }
  project_traces(state);
  return state;
}

void project_traces(SimState& state) {
  const MetricGraph& g = state.sys->graph;
  double residual = 0.0;
  auto set_ghost = [&](const TraceSlot& slot, const Vector& projected) {
    EdgeState& es = state.edges[slot.edge];
    if (slot.end == Endpoint::Tail)
      es.ghost_left = 2.0 * projected - es.u[0];
    else
      es.ghost_right = 2.0 * projected - es.u[es.cells - 1];
  };
  if (state.sys->has_local()) {
    for (int v = 0; v < g.num_vertices(); ++v) {
      const int kv = g.vertex_dim(v);
      Vector gamma(kv);
      for (const TraceSlot& slot : g.vertex_slots(v)) {
        const EdgeState& es = state.edges[slot.edge];
        gamma.segment(slot.offset, g.edge(slot.edge).block_size) =
            slot.end == Endpoint::Tail ? extrapolate_tail(es) : extrapolate_head(es);
      }
      const Matrix& q = state.Y_local[v];
      Vector proj = q.cols() == 0 ? Vector::Zero(kv) : Vector(q * (q.adjoint() * gamma));
      residual = std::max(residual,
                          (proj - (q.cols() == 0 ? Vector::Zero(kv)
                                                 : Vector(q * (q.adjoint() * proj))))
                              .norm());
      for (const TraceSlot& slot : g.vertex_slots(v))
        set_ghost(slot, proj.segment(slot.offset, g.edge(slot.edge).block_size));
    }
  } else {
    const int k = g.total_dim();
    Vector gamma(2 * k);
    for (int e = 0; e < g.num_edges(); ++e) {
      const EdgeState& es = state.edges[e];
      gamma.segment(g.edge_offset(e), g.edge(e).block_size) = extrapolate_tail(es);
      gamma.segment(k + g.edge_offset(e), g.edge(e).block_size) = extrapolate_head(es);
    }
    const Matrix& q = state.Y_global;
    Vector proj =
        q.cols() == 0 ? Vector::Zero(2 * k) : Vector(q * (q.adjoint() * gamma));
    residual = (proj - (q.cols() == 0 ? Vector::Zero(2 * k)
                                      : Vector(q * (q.adjoint() * proj))))
                   .norm();
    for (int e = 0; e < g.num_edges(); ++e) {
      const int ke = g.edge(e).block_size;
      set_ghost({e, Endpoint::Tail, 0}, proj.segment(g.edge_offset(e), ke));
      set_ghost({e, Endpoint::Head, 0}, proj.segment(k + g.edge_offset(e), ke));
    }
  }
  state.last_projection_residual = residual;
}

double cfl_time_step(const SimState& state) {
  double dt = std::numeric_limits<double>::infinity();
  for (const EdgeState& es : state.edges) dt = std::min(dt, es.dx / es.rho);
  return state.cfg.cfl * dt;
}

void step(SimState& state, double dt) {
  if (dt > cfl_time_step(state) * (1.0 + 1e-12))
    throw Error("simulator: time step violates the CFL bound");
  const int ne = int(state.edges.size());
  std::vector<std::vector<Vector>> k1(ne), k2(ne);

  project_traces(state);
  for (int e = 0; e < ne; ++e) apply_operator(state, state.edges[e], k1[e]);

  std::vector<std::vector<Vector>> u0(ne);
  for (int e = 0; e < ne; ++e) {
    u0[e] = state.edges[e].u;
    for (int i = 0; i < state.edges[e].cells; ++i)
      state.edges[e].u[i] = u0[e][i] + dt * k1[e][i];
  }
  const double res1 = state.last_projection_residual;

  project_traces(state);
  for (int e = 0; e < ne; ++e) apply_operator(state, state.edges[e], k2[e]);

  for (int e = 0; e < ne; ++e)
    for (int i = 0; i < state.edges[e].cells; ++i)
      state.edges[e].u[i] = u0[e][i] + 0.5 * dt * (k1[e][i] + k2[e][i]);

  state.last_projection_residual = std::max(res1, state.last_projection_residual);
  state.time += dt;
}

double energy(const SimState& state) {
  double en = 0.0;
  for (const EdgeState& es : state.edges)
    for (int i = 0; i < es.cells; ++i)
      en += 0.5 * es.dx * (es.Q_at[i] * es.u[i]).dot(es.u[i]).real();
  return en;
}

double min_real_part(const SimState& state) {
  double m = std::numeric_limits<double>::infinity();
  for (const EdgeState& es : state.edges)
    for (const Vector& u : es.u) m = std::min(m, u.real().minCoeff());
  return m;
}

double max_imag_part(const SimState& state) {
  double m = 0.0;
  for (const EdgeState& es : state.edges)
    for (const Vector& u : es.u) m = std::max(m, u.imag().cwiseAbs().maxCoeff());
  return m;
}

TimeSeries run_state(SimState& state) {
  TimeSeries ts;
  auto record = [&] {
    ts.t.push_back(state.time);
    ts.energy.push_back(energy(state));
    ts.boundary_residual.push_back(state.last_projection_residual);
    ts.min_real.push_back(min_real_part(state));
    ts.max_imag.push_back(max_imag_part(state));
  };
  record();
  const double dt_cfl = cfl_time_step(state);
  int n = 0;
  while (state.time < state.cfg.t_final - 1e-14) {
    const double dt = std::min(dt_cfl, state.cfg.t_final - state.time);
    step(state, dt);
    ++n;
    if (n % std::max(1, state.cfg.output_stride) == 0 ||
        state.time >= state.cfg.t_final - 1e-14)
      record();
  }
  return ts;
}

TimeSeries run(const System& sys, const SimConfig& cfg, const InitialData& init) {
  SimState state = discretize(sys, cfg, init);
  return run_state(state);
}

}  // namespace netwave
