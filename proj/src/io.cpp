#include "netwave/io.hpp"

#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>

#include "json.hpp"

namespace netwave {

using json = nlohmann::ordered_json;

namespace {

json complex_to_json(const Complex& z) { return json::array({z.real(), z.imag()}); }

Complex complex_from_json(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw Error("parse: " + where + ": complex numbers are [re, im] pairs");
  return Complex(j[0].get<double>(), j[1].get<double>());
}

json matrix_to_json(const Matrix& m) {
  json out = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) out.push_back(complex_to_json(m(i, j)));
  return out;
}

Matrix square_matrix_from_json(const json& j, int n, const std::string& where) {
  if (!j.is_array() || int(j.size()) != n * n)
    throw Error("parse: " + where + ": expected " + std::to_string(n * n) +
                " row-major entries");
  Matrix m(n, n);
  int idx = 0;
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) m(r, c) = complex_from_json(j[idx++], where);
  return m;
}

json polynomial_to_json(const MatrixPolynomial& p) {
  json out = json::array();
  for (const Matrix& m : p.coefficients()) out.push_back(matrix_to_json(m));
  return out;
}

MatrixPolynomial polynomial_from_json(const json& j, int n, const std::string& where) {
  if (!j.is_array() || j.empty())
    throw Error("parse: " + where + ": expected a nonempty array of matrices");
  std::vector<Matrix> coeffs;
  for (size_t d = 0; d < j.size(); ++d)
    coeffs.push_back(square_matrix_from_json(
        j[d], n, where + " degree " + std::to_string(d)));
  return MatrixPolynomial(std::move(coeffs));
}

json vectors_to_json(const Matrix& basis) {
  json out = json::array();
  for (Eigen::Index c = 0; c < basis.cols(); ++c) {
    json col = json::array();
    for (Eigen::Index r = 0; r < basis.rows(); ++r)
      col.push_back(complex_to_json(basis(r, c)));
    out.push_back(col);
  }
  return out;
}

Matrix vectors_from_json(const json& j, int rows, const std::string& where) {
  if (!j.is_array()) throw Error("parse: " + where + ": expected a list of vectors");
  Matrix m(rows, Eigen::Index(j.size()));
  for (size_t c = 0; c < j.size(); ++c) {
    const json& col = j[c];
    if (!col.is_array() || int(col.size()) != rows)
      throw Error("parse: " + where + ": vector " + std::to_string(c) +
                  " must have length " + std::to_string(rows));
    for (int r = 0; r < rows; ++r)
      m(r, Eigen::Index(c)) = complex_from_json(col[r], where);
  }
  return m;
}

struct TolField {
  const char* name;
  double Tolerances::* member;
};

constexpr TolField kTolFields[] = {
    {"herm_rel", &Tolerances::herm_rel},
    {"zero_rel", &Tolerances::zero_rel},
    {"iso_rel", &Tolerances::iso_rel},
    {"inv_rel", &Tolerances::inv_rel},
    {"eig_imag_rel", &Tolerances::eig_imag_rel},
    {"check_rel", &Tolerances::check_rel},
    {"subspace_rel", &Tolerances::subspace_rel},
    {"proj_tol", &Tolerances::proj_tol},
};

void tolerances_from_json(const json& j, Tolerances& tol) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool known = false;
    for (const auto& f : kTolFields)
      if (it.key() == f.name) {
        tol.*(f.member) = it.value().get<double>();
        known = true;
      }
    if (!known) throw Error("parse: tolerances: unknown field '" + it.key() + "'");
  }
}

json tolerances_to_json(const Tolerances& tol) {
  const Tolerances defaults;
  json out = json::object();
  for (const auto& f : kTolFields)
    if (tol.*(f.member) != defaults.*(f.member)) out[f.name] = tol.*(f.member);
  return out;
}

json initial_to_json(const InitialSpec& s) {
  json out = json::object();
  out["kind"] = s.kind;
  out["amplitude"] = s.amplitude;
  out["width"] = s.width;
  out["center"] = s.center;
  out["offset"] = s.offset;
  out["components"] = s.components;
  return out;
}

InitialSpec initial_from_json(const json& j) {
  InitialSpec s;
  if (j.contains("kind")) s.kind = j.at("kind").get<std::string>();
  if (j.contains("amplitude")) s.amplitude = j.at("amplitude").get<double>();
  if (j.contains("width")) s.width = j.at("width").get<double>();
  if (j.contains("center")) s.center = j.at("center").get<double>();
  if (j.contains("offset")) s.offset = j.at("offset").get<double>();
  if (j.contains("components"))
    s.components = j.at("components").get<std::vector<int>>();
  return s;
}

}  // namespace

Tolerances env_default_tolerances() {
  Tolerances tol;
  const char* path = std::getenv("NETWAVE_TOLERANCES");
  if (!path || !*path) return tol;
  std::ifstream in(path);
  if (!in) throw Error("NETWAVE_TOLERANCES points to an unreadable file: " +
                       std::string(path));
  json j = json::parse(in, nullptr, true, true);
  tolerances_from_json(j, tol);
  return tol;
}

System parse_system(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const std::exception& ex) {
    throw Error(std::string("parse: invalid JSON: ") + ex.what());
  }
  if (!j.is_object() || !j.contains("graph"))
    throw Error("parse: missing 'graph' section");

  System sys;
  sys.tol = env_default_tolerances();

  // graph
  const json& jg = j.at("graph");
  if (!jg.contains("edges") || !jg.at("edges").is_array())
    throw Error("parse: graph.edges must be an array");
  std::vector<EdgeSpec> edges;
  for (const json& je : jg.at("edges")) {
    EdgeSpec e;
    if (!je.contains("id") || !je.contains("tail") || !je.contains("head"))
      throw Error("parse: each edge needs id, tail, head");
    e.id = je.at("id").get<std::string>();
    e.tail = je.at("tail").get<std::string>();
    e.head = je.at("head").get<std::string>();
    e.length = je.value("length", 1.0);
    e.block_size = je.value("block_size", 1);
    edges.push_back(e);
  }
  std::vector<std::string> declared;
  if (jg.contains("vertices"))
    declared = jg.at("vertices").get<std::vector<std::string>>();
  sys.graph = MetricGraph::build(edges, declared);

  // coefficients
  if (!j.contains("coefficients"))
    throw Error("parse: missing 'coefficients' section");
  const json& jc = j.at("coefficients");
  sys.coefficients.resize(sys.graph.num_edges());
  for (int e = 0; e < sys.graph.num_edges(); ++e) {
    const std::string& id = sys.graph.edge(e).id;
    if (!jc.contains(id))
      throw Error("parse: coefficients missing for edge '" + id + "'");
    const json& jce = jc.at(id);
    const int ke = sys.graph.edge(e).block_size;
    if (!jce.contains("M") || !jce.contains("N"))
      throw Error("parse: edge '" + id + "' needs M and N");
    sys.coefficients[e].M =
        polynomial_from_json(jce.at("M"), ke, "edge '" + id + "' M");
    sys.coefficients[e].N =
        polynomial_from_json(jce.at("N"), ke, "edge '" + id + "' N");
    if (jce.contains("Q"))
      sys.coefficients[e].Q =
          polynomial_from_json(jce.at("Q"), ke, "edge '" + id + "' Q");
    for (auto it = jce.begin(); it != jce.end(); ++it)
      if (it.key() != "M" && it.key() != "N" && it.key() != "Q")
        throw Error("parse: edge '" + id + "': unknown field '" + it.key() + "'");
  }

  // boundary
  if (!j.contains("boundary")) throw Error("parse: missing 'boundary' section");
  const json& jb = j.at("boundary");
  const bool has_local = jb.contains("local");
  const bool has_global = jb.contains("global");
  if (has_local == has_global)
    throw Error("parse: boundary needs exactly one of 'local' or 'global'");
  if (has_local) {
    LocalBoundary lb;
    lb.Y.resize(sys.graph.num_vertices());
    const json& jl = jb.at("local");
    for (int v = 0; v < sys.graph.num_vertices(); ++v) {
      const std::string& vid = sys.graph.vertex_id(v);
      if (!jl.contains(vid))
        throw Error("parse: boundary.local missing vertex '" + vid + "'");
      lb.Y[v] = vectors_from_json(jl.at(vid), sys.graph.vertex_dim(v),
                                  "Y at vertex '" + vid + "'");
    }
    for (auto it = jl.begin(); it != jl.end(); ++it)
      sys.graph.vertex_index(it.key());  // throws on unknown vertex
    sys.local = std::move(lb);
  } else {
    sys.global = GlobalBoundary{vectors_from_json(
        jb.at("global"), 2 * sys.graph.total_dim(), "global Y")};
  }

  if (j.contains("tolerances")) tolerances_from_json(j.at("tolerances"), sys.tol);

  if (j.contains("simulation")) {
    const json& js = j.at("simulation");
    SimSection s;
    s.cells_per_unit = js.value("cells_per_unit", s.cells_per_unit);
    s.cfl = js.value("cfl", s.cfl);
    s.t_final = js.value("t_final", s.t_final);
    s.output_stride = js.value("output_stride", s.output_stride);
    s.scheme = js.value("scheme", s.scheme);
    if (js.contains("initial")) s.initial = initial_from_json(js.at("initial"));
    sys.simulation = s;
  }

  if (j.contains("notes"))
    sys.notes = j.at("notes").get<std::vector<std::string>>();

  validate_system(sys);
  return sys;
}

System load_system(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_system(ss.str());
}

std::string emit_system(const System& sys) {
  json j = json::object();
  {
    json jg = json::object();
    jg["vertices"] = sys.graph.vertex_ids();
    json jes = json::array();
    for (const EdgeSpec& e : sys.graph.edges()) {
      json je = json::object();
      je["id"] = e.id;
      je["tail"] = e.tail;
      je["head"] = e.head;
      je["length"] = e.length;
      je["block_size"] = e.block_size;
      jes.push_back(je);
    }
    jg["edges"] = jes;
    j["graph"] = jg;
  }
  {
    json jc = json::object();
    for (int e = 0; e < sys.graph.num_edges(); ++e) {
      const EdgeCoefficients& c = sys.coefficients[e];
      json jce = json::object();
      jce["M"] = polynomial_to_json(c.M);
      jce["N"] = polynomial_to_json(c.N);
      if (c.Q) jce["Q"] = polynomial_to_json(*c.Q);
      jc[sys.graph.edge(e).id] = jce;
    }
    j["coefficients"] = jc;
  }
  {
    json jb = json::object();
    if (sys.has_local()) {
      json jl = json::object();
      for (int v = 0; v < sys.graph.num_vertices(); ++v)
        jl[sys.graph.vertex_id(v)] = vectors_to_json(sys.local->Y[v]);
      jb["local"] = jl;
    } else {
      jb["global"] = vectors_to_json(sys.global->Y);
    }
    j["boundary"] = jb;
  }
  {
    json jt = tolerances_to_json(sys.tol);
    if (!jt.empty()) j["tolerances"] = jt;
  }
  if (sys.simulation) {
    const SimSection& s = *sys.simulation;
    json js = json::object();
    js["cells_per_unit"] = s.cells_per_unit;
    js["cfl"] = s.cfl;
    js["t_final"] = s.t_final;
    js["output_stride"] = s.output_stride;
    js["scheme"] = s.scheme;
    js["initial"] = initial_to_json(s.initial);
    j["simulation"] = js;
  }
  if (!sys.notes.empty()) j["notes"] = sys.notes;
  return j.dump(2) + "\n";
}

void save_system(const System& sys, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write '" + path + "'");
  out << emit_system(sys);
}

namespace {

json evidence_to_json(const Evidence& e) {
  json out = json::object();
  out["rule"] = e.rule;
  out["detail"] = e.detail;
  out["margin"] = e.margin;
  return out;
}

void render_flag(std::ostream& os, const char* name, Verdict v, const Evidence& e,
                 bool explain) {
  os << name << ": " << to_string(v);
  if (!e.rule.empty()) os << "  [" << e.rule << "]";
  os << "\n";
  if (explain && !e.detail.empty())
    os << "    " << e.detail << " (margin " << e.margin << ")\n";
}

}  // namespace

std::string render_report_text(const WellPosednessReport& rep, bool explain) {
  std::ostringstream os;
  render_flag(os, "group", rep.group, rep.group_evidence, explain);
  render_flag(os, "unitary group", rep.unitary_group, rep.unitary_evidence, explain);
  render_flag(os, "quasi-contractive semigroup", rep.quasi_contractive_semigroup,
              rep.quasi_contractive_evidence, explain);
  render_flag(os, "contractive semigroup", rep.contractive_semigroup,
              rep.contractive_evidence, explain);
  render_flag(os, "real", rep.real, rep.real_evidence, explain);
  render_flag(os, "positive", rep.positive, rep.positive_evidence, explain);
  os << "quasi-dissipativity bound omega: " << rep.omega << "\n";
  if (explain) {
    for (const VertexDetail& vd : rep.vertex_details)
      os << "  vertex '" << vd.vertex << "': dim Y = " << vd.dim_y
         << ", cone " << to_string(vd.y_class) << ", adjoint cone "
         << to_string(vd.adjoint_class) << "\n";
    if (rep.dimension) {
      os << "  dimension condition: sum dim Y_v = " << rep.dimension->dim_sum
         << " (k = " << rep.dimension->k << "), stacked rank "
         << rep.dimension->stacked_rank << ", margin " << rep.dimension->margin
         << "\n";
      if (rep.dimension->violating_pair)
        os << "  overlapping orthocomplements at vertices '"
           << rep.dimension->violating_pair->first << "' and '"
           << rep.dimension->violating_pair->second << "'\n";
    }
    if (rep.global_report) {
      const auto& g = *rep.global_report;
      os << "  global condition: dim Y = " << g.dim_Y << ", dim Y^perp = "
         << g.dim_Yperp << ", dim(Y n K) = " << g.intersection_with_K
         << ", basis_global = " << (g.basis_global ? "true" : "false")
         << ", endpoint fallback " << (g.infty_applicable ? "applicable" : "n/a")
         << " rank " << g.pi_ell_rank << " => "
         << (g.basis_global_infty ? "true" : "false") << "\n";
    }
  }
  for (const std::string& note : rep.notes) os << "note: " << note << "\n";
  return os.str();
}

std::string report_to_json(const WellPosednessReport& rep) {
  json j = json::object();
  j["group"] = to_string(rep.group);
  j["unitary_group"] = to_string(rep.unitary_group);
  j["quasi_contractive_semigroup"] = to_string(rep.quasi_contractive_semigroup);
  j["contractive_semigroup"] = to_string(rep.contractive_semigroup);
  j["real"] = to_string(rep.real);
  j["positive"] = to_string(rep.positive);
  j["evidence"] = json::object();
  j["evidence"]["group"] = evidence_to_json(rep.group_evidence);
  j["evidence"]["unitary_group"] = evidence_to_json(rep.unitary_evidence);
  j["evidence"]["quasi_contractive_semigroup"] =
      evidence_to_json(rep.quasi_contractive_evidence);
  j["evidence"]["contractive_semigroup"] = evidence_to_json(rep.contractive_evidence);
  j["evidence"]["real"] = evidence_to_json(rep.real_evidence);
  j["evidence"]["positive"] = evidence_to_json(rep.positive_evidence);
  j["omega"] = rep.omega;
  j["energy_conserved"] = rep.energy_conserved;
  json vds = json::array();
  for (const VertexDetail& vd : rep.vertex_details) {
    json v = json::object();
    v["vertex"] = vd.vertex;
    v["dim_Y"] = vd.dim_y;
    v["cone"] = to_string(vd.y_class);
    v["adjoint_cone"] = to_string(vd.adjoint_class);
    vds.push_back(v);
  }
  j["vertices"] = vds;
  if (rep.dimension) {
    json d = json::object();
    d["dim_sum"] = rep.dimension->dim_sum;
    d["k"] = rep.dimension->k;
    d["stacked_rank"] = rep.dimension->stacked_rank;
    d["ok"] = rep.dimension->ok();
    j["dimension_condition"] = d;
  }
  if (rep.global_report) {
    const auto& g = *rep.global_report;
    json d = json::object();
    d["dim_Y"] = g.dim_Y;
    d["dim_Yperp"] = g.dim_Yperp;
    d["intersection_with_K"] = g.intersection_with_K;
    d["basis_global"] = g.basis_global;
    d["fallback_applicable"] = g.infty_applicable;
    d["pi_ell_rank"] = g.pi_ell_rank;
    d["basis_global_infty"] = g.basis_global_infty;
    j["global_condition"] = d;
  }
  j["notes"] = rep.notes;
  return j.dump(2) + "\n";
}

void write_timeseries_csv(const TimeSeries& ts, std::ostream& os) {
  os << "t, energy, boundary_residual, min_real, max_imag\n";
  os.precision(17);
  for (size_t i = 0; i < ts.t.size(); ++i)
    os << ts.t[i] << ", " << ts.energy[i] << ", " << ts.boundary_residual[i]
       << ", " << ts.min_real[i] << ", " << ts.max_imag[i] << "\n";
}

void write_snapshot_csv(const SimState& state, int edge, std::ostream& os) {
  const EdgeState& es = state.edges.at(edge);
  const int ke = int(es.u.empty() ? 0 : es.u[0].size());
  os << "x";
  for (int c = 0; c < ke; ++c) os << ", re(u_" << c + 1 << "), im(u_" << c + 1 << ")";
  os << "\n";
  os.precision(17);
  for (int i = 0; i < es.cells; ++i) {
    os << (i + 0.5) * es.dx;
    for (int c = 0; c < ke; ++c)
      os << ", " << es.u[i](c).real() << ", " << es.u[i](c).imag();
    os << "\n";
  }
}

}  // namespace netwave
