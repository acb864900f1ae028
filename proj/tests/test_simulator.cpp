#include "doctest.h"

#include <cmath>
#include <numbers>

#include "netwave/classifier.hpp"
#include "netwave/models.hpp"
#include "netwave/simulator.hpp"

using namespace netwave;

namespace {

System scalar_loop(double speed, double damping, double length = 1.0) {
  System sys;
  sys.graph = MetricGraph::build({{"e1", "v1", "v1", length, 1}});
  Matrix m(1, 1), n(1, 1), q(1, 1);
  m << speed;
  n << damping;
  q << 1.0;
  sys.coefficients = {{MatrixPolynomial::constant(m), MatrixPolynomial::constant(n),
                       MatrixPolynomial::constant(q)}};
  Matrix Y(2, 1);
  Y << 1.0, 1.0;
  sys.local = LocalBoundary{{Y}};
  return sys;
}

InitialData sine_data(const System& sys) {
  InitialSpec spec;
  spec.kind = "sine";
  return make_initial(sys, spec);
}

}  // namespace

TEST_CASE("discretization geometry") {
  System loop = scalar_loop(1.0, 0.0);
  SimConfig cfg;
  cfg.cells_per_unit = 400;
  SimState st = discretize(loop, cfg, sine_data(loop));
  CHECK(st.edges[0].cells == 400);
  CHECK(st.edges[0].dx == doctest::Approx(1.0 / 400));

  auto star = make_model("wave_star", {}).system;
  // lengths 1 and 2
  System sys = star;
  sys.graph = MetricGraph::build({{"e1", "v0", "v1", 1.0, 2}, {"e2", "v0", "v2", 2.0, 2}});
  sys.coefficients = {star.coefficients[0], star.coefficients[1]};
  std::vector<Matrix> Y = {star.local->Y[0], star.local->Y[1], star.local->Y[2]};
  Y[0] = Matrix(4, 0);  // center now has degree 2
  {
    Matrix c(4, 2);
    c << 1, 0, 0, 1, 1, 0, 0, 1;  // continuity of both components
    Y[sys.graph.vertex_index("v0")] = c;
  }
  sys.local = LocalBoundary{Y};
  SimState st2 = discretize(sys, cfg, make_initial(sys, InitialSpec{}));
  CHECK(st2.edges[0].cells == 400);
  CHECK(st2.edges[1].cells == 800);
}

TEST_CASE("characteristic transform requires constant flux matrices") {
  auto preset = make_model("saint_venant_star",
                           {{"V", "4"}, {"g", "1"}, {"H", "1"}, {"steady", "affine"}});
  SimConfig cfg;
  cfg.scheme = Scheme::CharacteristicUpwind;
  cfg.cells_per_unit = 50;
  CHECK_THROWS_WITH_AS(
      discretize(preset.system, cfg, make_initial(preset.system, InitialSpec{})),
      doctest::Contains("local_lax_friedrichs"), Error);
  cfg.scheme = Scheme::LocalLaxFriedrichs;
  CHECK_NOTHROW(discretize(preset.system, cfg,
                           make_initial(preset.system, InitialSpec{})));
}

TEST_CASE("one period around the loop returns the profile") {
  System loop = scalar_loop(1.0, 0.0);
  SimConfig cfg;
  cfg.cells_per_unit = 800;
  cfg.t_final = 1.0;
  SimState st = discretize(loop, cfg, sine_data(loop));
  std::vector<Vector> u0;
  for (const Vector& u : st.edges[0].u) u0.push_back(u);
  run_state(st);
  CHECK(st.time == doctest::Approx(1.0));
  double num = 0.0, den = 0.0;
  for (int i = 0; i < st.edges[0].cells; ++i) {
    num += std::norm(st.edges[0].u[i](0) - u0[i](0));
    den += std::norm(u0[i](0));
  }
  CHECK(std::sqrt(num / den) <= 0.15);
}

TEST_CASE("zero-order decay is integrated to third order per step") {
  System loop = scalar_loop(1.0, -1.0);
  SimConfig cfg;
  cfg.cells_per_unit = 50;
  InitialSpec spec;
  spec.kind = "constant";
  SimState st = discretize(loop, cfg, make_initial(loop, spec));
  const double dt = cfl_time_step(st);
  step(st, dt);
  const double factor = st.edges[0].u[10](0).real();
  CHECK(factor == doctest::Approx(1.0 - dt + dt * dt / 2.0).epsilon(1e-13));
  CHECK(std::abs(factor - std::exp(-dt)) <= dt * dt * dt);
}

TEST_CASE("damped line model dissipates energy stepwise") {
  auto preset = make_model("telegrapher", {{"G", "1"}, {"K", "1"}});
  SimConfig cfg;
  cfg.cells_per_unit = 100;
  cfg.t_final = 1.0;
  TimeSeries ts = run(preset.system, cfg,
                      make_initial(preset.system, preset.system.simulation->initial));
  const double e0 = ts.energy.front();
  for (size_t i = 1; i < ts.energy.size(); ++i)
    CHECK(ts.energy[i] <= ts.energy[i - 1] + 1e-10 * e0);
}

TEST_CASE("trace projection enforces the boundary set") {
  // zero condition forces the face value to vanish
  System loop = scalar_loop(1.0, 0.0);
  loop.local->Y[0] = Matrix(2, 0);
  SimConfig cfg;
  cfg.cells_per_unit = 50;
  SimState st = discretize(loop, cfg, sine_data(loop));
  project_traces(st);
  const auto& es = st.edges[0];
  CHECK(std::abs((es.ghost_left(0) + es.u[0](0)) / 2.0) < 1e-15);
  CHECK(std::abs((es.ghost_right(0) + es.u[es.cells - 1](0)) / 2.0) < 1e-15);

  // continuity across a two-edge junction replaces faces by their mean
  System path;
  path.graph = MetricGraph::build({{"e1", "a", "b", 1.0, 1}, {"e2", "b", "c", 1.0, 1}});
  Matrix m(1, 1), n(1, 1), q(1, 1);
  m << 1.0;
  n << 0.0;
  q << 1.0;
  path.coefficients = {{MatrixPolynomial::constant(m), MatrixPolynomial::constant(n),
                        MatrixPolynomial::constant(q)},
                       {MatrixPolynomial::constant(m), MatrixPolynomial::constant(n),
                        MatrixPolynomial::constant(q)}};
  Matrix cont(2, 1), full(1, 1);
  cont << 1.0, 1.0;
  full << 1.0;
  path.local = LocalBoundary{{full, cont, full}};
  InitialSpec spec;
  spec.kind = "gaussian";
  spec.center = 0.9;
  SimState ps = discretize(path, cfg, make_initial(path, spec));
  project_traces(ps);
  const auto& e1 = ps.edges[0];
  const auto& e2 = ps.edges[1];
  const double head_face = ((e1.ghost_right(0) + e1.u[e1.cells - 1](0)) / 2.0).real();
  const double tail_face = ((e2.ghost_left(0) + e2.u[0](0)) / 2.0).real();
  const double prov_head =
      (1.5 * e1.u[e1.cells - 1](0) - 0.5 * e1.u[e1.cells - 2](0)).real();
  const double prov_tail = (1.5 * e2.u[0](0) - 0.5 * e2.u[1](0)).real();
  CHECK(head_face == doctest::Approx(tail_face).epsilon(1e-12));
  CHECK(head_face == doctest::Approx((prov_head + prov_tail) / 2.0).epsilon(1e-12));

  // the relativistic junction conditions are met to machine precision
  auto dirac = make_model("dirac_star", {});
  SimState ds = discretize(dirac.system, cfg,
                           make_initial(dirac.system, dirac.system.simulation->initial));
  project_traces(ds);
  CHECK(ds.last_projection_residual <= 1e-12);
}

TEST_CASE("energy drift halves when the grid is refined") {
  System loop = scalar_loop(1.0, 0.0, 2.0);
  auto drift_at = [&](double cells) {
    SimConfig cfg;
    cfg.cells_per_unit = cells;
    cfg.t_final = 1.0;
    TimeSeries ts = run(loop, cfg, sine_data(loop));
    return std::abs(ts.energy.back() - ts.energy.front()) / ts.energy.front();
  };
  const double coarse = drift_at(100), fine = drift_at(200);
  CHECK(coarse / fine >= 1.5);
  CHECK(coarse / fine <= 3.0);
}

TEST_CASE("positivity probe: redistribution network keeps nonnegative data") {
  auto preset = make_model("transport_network", {});
  SimConfig cfg = SimConfig::from_section(*preset.system.simulation);
  cfg.cells_per_unit = 200;
  cfg.t_final = 0.5;
  TimeSeries ts =
      run(preset.system, cfg, make_initial(preset.system, preset.system.simulation->initial));
  CHECK(ts.min_real.front() >= 0.0);
  for (double m : ts.min_real) CHECK(m >= -1e-12);
}

TEST_CASE("reality probe: real systems keep exactly real data") {
  for (const char* name : {"second_sound", "wave_star", "saint_venant_star"}) {
    auto preset = make_model(name, {});
    SimConfig cfg = SimConfig::from_section(*preset.system.simulation);
    cfg.cells_per_unit = 60;
    cfg.t_final = 0.3;
    TimeSeries ts = run(preset.system, cfg,
                        make_initial(preset.system, preset.system.simulation->initial));
    CAPTURE(name);
    for (double m : ts.max_imag) CHECK(m == 0.0);
  }
}

TEST_CASE("non-positive elastic flow undershoots from nonnegative data") {
  auto preset = make_model("wave_star", {});
  SimConfig cfg = SimConfig::from_section(*preset.system.simulation);
  cfg.cells_per_unit = 200;
  cfg.t_final = 1.0;
  TimeSeries ts = run(preset.system, cfg,
                      make_initial(preset.system, preset.system.simulation->initial));
  CHECK(ts.min_real.front() >= -1e-12);
  double worst = 0.0;
  for (double m : ts.min_real) worst = std::min(worst, m);
  CHECK(worst < -1e-3);
}

TEST_CASE("boundary residual stays at machine precision") {
  auto preset = make_model("second_sound", {});
  SimConfig cfg;
  cfg.cells_per_unit = 60;
  cfg.t_final = 0.2;
  TimeSeries ts = run(preset.system, cfg,
                      make_initial(preset.system, preset.system.simulation->initial));
  for (double r : ts.boundary_residual) CHECK(r <= 1e-12);
}

TEST_CASE("CFL guard") {
  System loop = scalar_loop(1.0, 0.0);
  SimConfig cfg;
  cfg.cells_per_unit = 50;
  SimState st = discretize(loop, cfg, sine_data(loop));
  CHECK_THROWS_AS(step(st, 10.0 * cfl_time_step(st)), Error);
}

TEST_CASE("standing mode against the separated analytic solution") {
  // one string, strain balance (Neumann) at the tail and Dirichlet at the
  // head: u(t,x) = cos(om x) cos(om t) with om = pi/2
  auto preset = make_model("wave_star", {{"J", "1"}, {"tip", "dirichlet"}});
  const System& sys = preset.system;
  const double om = std::numbers::pi / 2.0;
  InitialData init = [&](int, double x) {
    Vector v(2);
    v << -om * std::sin(om * x), 0.0;
    return v;
  };
  auto error_at = [&](double cells) {
    SimConfig cfg;
    cfg.cells_per_unit = cells;
    cfg.t_final = 1.0;
    SimState st = discretize(sys, cfg, init);
    run_state(st);
    double num = 0, den = 0;
    for (int i = 0; i < st.edges[0].cells; ++i) {
      const double x = (i + 0.5) * st.edges[0].dx;
      Vector exact(2);
      exact << -om * std::sin(om * x) * std::cos(om),
          -om * std::cos(om * x) * std::sin(om);
      num += (st.edges[0].u[i] - exact).squaredNorm();
      den += exact.squaredNorm();
    }
    return std::sqrt(num / den);
  };
  const double coarse = error_at(200), fine = error_at(400);
  CHECK(coarse <= 0.01);
  CHECK(coarse / fine >= 1.5);
  CHECK(coarse / fine <= 3.0);
}

TEST_CASE("the two schemes coincide when every speed has unit magnitude") {
  // symmetric unit-speed flux: upwinding per characteristic equals the
  // central difference plus full-strength viscosity
  auto star = make_model("wave_star", {});
  InitialData init = make_initial(star.system, star.system.simulation->initial);
  SimConfig a, b;
  a.cells_per_unit = b.cells_per_unit = 100;
  a.t_final = b.t_final = 0.25;
  a.scheme = Scheme::CharacteristicUpwind;
  b.scheme = Scheme::LocalLaxFriedrichs;
  SimState sa = discretize(star.system, a, init);
  SimState sb = discretize(star.system, b, init);
  run_state(sa);
  run_state(sb);
  double diff = 0;
  for (size_t e = 0; e < sa.edges.size(); ++e)
    for (int i = 0; i < sa.edges[e].cells; ++i)
      diff = std::max(diff, (sa.edges[e].u[i] - sb.edges[e].u[i]).norm());
  CHECK(diff <= 1e-12);
}

TEST_CASE("complex-valued evolution conserves the energy of a unitary system") {
  auto dirac = make_model("dirac_star", {});
  dirac.system.simulation->initial.width = 0.25;
  SimConfig cfg;
  cfg.cells_per_unit = 400;
  cfg.t_final = 0.5;
  TimeSeries ts = run(dirac.system, cfg,
                      make_initial(dirac.system, dirac.system.simulation->initial));
  const double drift =
      std::abs(ts.energy.back() - ts.energy.front()) / ts.energy.front();
  CHECK(drift <= 0.04);
  for (double r : ts.boundary_residual) CHECK(r <= 1e-12);
}
