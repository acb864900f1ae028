#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "netwave/boundary.hpp"
#include "netwave/classifier.hpp"
#include "netwave/io.hpp"
#include "netwave/models.hpp"
#include "netwave/simulator.hpp"

namespace {

using namespace netwave;

Verdict flag_by_name(const WellPosednessReport& rep, const std::string& name) {
  if (name == "group") return rep.group;
  if (name == "unitary") return rep.unitary_group;
  if (name == "semigroup") return rep.quasi_contractive_semigroup;
  if (name == "contractive") return rep.contractive_semigroup;
  if (name == "real") return rep.real;
  if (name == "positive") return rep.positive;
  throw Error("unknown verdict name '" + name +
              "' (group, unitary, semigroup, contractive, real, positive)");
}

int cmd_check(const std::string& path, bool explain,
              const std::vector<std::string>& require, const std::string& json_out,
              bool suggest) {
  System sys = load_system(path);
  WellPosednessReport rep = classify(sys);
  std::cout << render_report_text(rep, explain);
  if (suggest && sys.has_local()) {
    // maximal totally isotropic candidates per vertex, as a convenience
    for (int v = 0; v < sys.graph.num_vertices(); ++v) {
      Matrix T = vertex_form_matrix(sys, v);
      auto form = HermitianForm::validate(T, sys.tol);
      Matrix iso = max_totally_isotropic_basis(form, sys.tol);
      std::cout << "suggestion: vertex '" << sys.graph.vertex_id(v)
                << "' admits a totally isotropic space of dimension " << iso.cols()
                << " (supplied: " << sys.local->Y[v].cols() << ")\n";
    }
  }
  if (!json_out.empty()) {
    std::ofstream out(json_out);
    if (!out) throw Error("cannot write '" + json_out + "'");
    out << report_to_json(rep);
  }
  bool any_no = false, any_undetermined = false;
  for (const std::string& name : require) {
    Verdict v = flag_by_name(rep, name);
    if (v == Verdict::No) any_no = true;
    if (v == Verdict::Undetermined) any_undetermined = true;
  }
  if (any_no) return 2;
  if (any_undetermined) return 3;
  return 0;
}

int cmd_simulate(const std::string& path, double tmax, double cells, double cfl,
                 std::string scheme, const std::string& out_prefix, bool snapshots,
                 int stride, const std::vector<std::string>& probes) {
  System sys = load_system(path);
  WellPosednessReport rep = classify(sys);

  SimConfig cfg;
  if (sys.simulation) cfg = SimConfig::from_section(*sys.simulation);
  if (tmax > 0) cfg.t_final = tmax;
  if (cells > 0) cfg.cells_per_unit = cells;
  if (cfl > 0) cfg.cfl = cfl;
  if (!scheme.empty()) cfg.scheme = scheme_from_string(scheme);
  if (stride > 0) cfg.output_stride = stride;
  auto probe_requested = [&](const std::string& name) {
    return probes.empty() ||
           std::find(probes.begin(), probes.end(), name) != probes.end();
  };
  cfg.probe_positivity = probe_requested("positivity");
  cfg.probe_reality = probe_requested("reality");

  InitialSpec ispec = sys.simulation ? sys.simulation->initial : InitialSpec{};
  SimState state = discretize(sys, cfg, make_initial(sys, ispec));
  TimeSeries ts = run_state(state);

  const std::string prefix = out_prefix.empty() ? "netwave_out" : out_prefix;
  {
    std::ofstream out(prefix + "_series.csv");
    if (!out) throw Error("cannot write '" + prefix + "_series.csv'");
    write_timeseries_csv(ts, out);
    std::cout << "wrote " << prefix + "_series.csv" << "\n";
  }
  if (snapshots) {
    for (int e = 0; e < sys.graph.num_edges(); ++e) {
      std::string name = prefix + "_edge_" + sys.graph.edge(e).id + ".csv";
      std::ofstream out(name);
      if (!out) throw Error("cannot write '" + name + "'");
      write_snapshot_csv(state, e, out);
    }
    std::cout << "wrote per-edge snapshots with prefix " << prefix << "\n";
  }

  // observed behavior vs classifier verdicts
  const double e0 = ts.energy.front();
  const double drift = e0 > 0 ? std::abs(ts.energy.back() - e0) / e0 : 0.0;
  double max_step_increase = 0.0;
  for (size_t i = 1; i < ts.energy.size(); ++i)
    max_step_increase = std::max(max_step_increase, ts.energy[i] - ts.energy[i - 1]);
  double min_real = *std::min_element(ts.min_real.begin(), ts.min_real.end());
  double max_imag = *std::max_element(ts.max_imag.begin(), ts.max_imag.end());

  std::cout.precision(6);
  auto probe_on = [&](const std::string& name) {
    return name == "positivity" ? cfg.probe_positivity : cfg.probe_reality;
  };
  // first-order drift allowance for the consistency verdict: the scheme
  // dissipates O(k^2 dx) per unit time; budget twice that for a 2*pi mode
  double max_dx = 0.0;
  for (const auto& es : state.edges) max_dx = std::max(max_dx, es.dx);
  const double drift_budget =
      std::min(0.5, 2.0 * 4.0 * M_PI * M_PI * max_dx * std::max(1.0, cfg.t_final));
  std::cout << "energy drift " << drift * 100.0 << "%";
  if (rep.unitary_group == Verdict::Yes)
    std::cout << " (unitary: " << (drift <= drift_budget ? "consistent" : "DISAGREES")
              << ")";
  std::cout << "\n";
  if (rep.contractive_semigroup == Verdict::Yes)
    std::cout << "energy "
              << (max_step_increase <= 1e-10 * std::max(1.0, e0)
                      ? "monotone decreasing (contractive: consistent)"
                      : "increased by " + std::to_string(max_step_increase) +
                            " in a step (contractive: DISAGREES)")
              << "\n";
  if (rep.real == Verdict::Yes && probe_on("reality"))
    std::cout << "max |Im u| = " << max_imag << " (real: "
              << (max_imag <= 1e-12 ? "consistent" : "DISAGREES") << ")\n";
  const bool data_nonneg = ts.min_real.front() >= -1e-12;
  if (!probe_on("positivity")) {
  } else if (rep.positive == Verdict::Yes && data_nonneg)
    std::cout << "min Re u = " << min_real << " (positive: "
              << (min_real >= -1e-12 ? "consistent" : "DISAGREES") << ")\n";
  else if (rep.positive == Verdict::No && data_nonneg && min_real < 0) {
    double t_under = ts.t.back();
    for (size_t i = 0; i < ts.t.size(); ++i)
      if (ts.min_real[i] < -1e-3) {
        t_under = ts.t[i];
        break;
      }
    std::cout << "negative undershoot observed at t=" << t_under
              << " (min Re u = " << min_real << "), consistent with positive: no\n";
  }
  std::cout << "max boundary residual "
            << *std::max_element(ts.boundary_residual.begin(),
                                 ts.boundary_residual.end())
            << "\n";
  return 0;
}

int cmd_models(const std::string& sub, const std::string& name,
               const std::vector<std::string>& params, const std::string& out) {
  if (sub == "list") {
    for (const std::string& n : model_names()) std::cout << n << "\n";
    return 0;
  }
  std::map<std::string, std::string> pmap;
  for (const std::string& kv : params) {
    auto pos = kv.find('=');
    if (pos == std::string::npos)
      throw Error("--param expects key=value, got '" + kv + "'");
    pmap[kv.substr(0, pos)] = kv.substr(pos + 1);
  }
  ModelPreset preset = make_model(name, pmap);
  std::string text = emit_system(preset.system);
  if (out.empty()) {
    std::cout << text;
  } else {
    std::ofstream f(out);
    if (!f) throw Error("cannot write '" + out + "'");
    f << text;
    std::cout << "wrote " << out << " (" << preset.summary << ")\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"netwave: well-posedness checks and finite-volume evolution for "
               "first-order hyperbolic systems on metric graphs"};
  app.require_subcommand(1);

  std::string check_path, check_json;
  bool check_explain = false;
  std::vector<std::string> check_require;
  auto* check = app.add_subcommand("check", "classify a system file");
  check->add_option("file", check_path, "system file")->required();
  check->add_flag("--explain", check_explain, "print per-criterion evidence");
  check->add_option("--require", check_require,
                    "verdicts that must be 'yes' (exit 2 on no, 3 on undetermined)");
  check->add_option("--json", check_json, "write the machine-readable report here");
  bool check_suggest = false;
  check->add_flag("--suggest", check_suggest,
                  "print maximal isotropic candidates per vertex");

  std::string sim_path, sim_scheme, sim_out;
  std::vector<std::string> sim_probes;
  double sim_tmax = 0, sim_cells = 0, sim_cfl = 0;
  bool sim_snapshots = false;
  int sim_stride = 0;
  auto* sim = app.add_subcommand("simulate", "evolve a system and record diagnostics");
  sim->add_option("file", sim_path, "system file")->required();
  sim->add_option("--tmax", sim_tmax, "final time");
  sim->add_option("--cells", sim_cells, "cells per unit length");
  sim->add_option("--cfl", sim_cfl, "CFL number");
  sim->add_option("--scheme", sim_scheme,
                  "characteristic_upwind or local_lax_friedrichs");
  sim->add_option("--out", sim_out, "output file prefix");
  sim->add_option("--stride", sim_stride, "record every n-th step");
  sim->add_flag("--snapshots", sim_snapshots, "write final per-edge snapshots");
  sim->add_option("--probe", sim_probes,
                  "restrict the summary probes (positivity, reality)");

  std::string models_name, models_out;
  std::vector<std::string> models_params;
  auto* models = app.add_subcommand("models", "built-in example systems");
  auto* mlist = models->add_subcommand("list", "list preset names");
  auto* memit = models->add_subcommand("emit", "emit a preset as a system file");
  memit->add_option("name", models_name, "preset name")->required();
  memit->add_option("--param", models_params, "key=value parameter override");
  memit->add_option("-o,--out", models_out, "output path (stdout if omitted)");
  models->require_subcommand(1);

  CLI11_PARSE(app, argc, argv);

  try {
    if (check->parsed())
      return cmd_check(check_path, check_explain, check_require, check_json,
                       check_suggest);
    if (sim->parsed())
      return cmd_simulate(sim_path, sim_tmax, sim_cells, sim_cfl, sim_scheme,
                          sim_out, sim_snapshots, sim_stride, sim_probes);
    if (models->parsed()) {
      if (mlist->parsed()) return cmd_models("list", "", {}, "");
      if (memit->parsed())
        return cmd_models("emit", models_name, models_params, models_out);
    }
  } catch (const netwave::Error& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 1;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 1;
  }
  return 0;
}
