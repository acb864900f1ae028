#include "netwave/models.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <set>
#include <sstream>
#include <utility>

#include "netwave/boundary.hpp"
#include "netwave/coefficients.hpp"
#include "netwave/forms.hpp"
#include "netwave/linalg.hpp"

namespace netwave {

namespace {

class Params {
public:
  Params(const std::string& model, const std::map<std::string, std::string>& raw)
      : model_(model), raw_(raw) {}

  double number(const std::string& key, double fallback) {
    used_.insert(key);
    auto it = raw_.find(key);
    if (it == raw_.end()) return fallback;
    try {
      size_t pos = 0;
      double v = std::stod(it->second, &pos);
      if (pos != it->second.size()) throw std::invalid_argument("");
      return v;
    } catch (...) {
      throw Error(model_ + ": parameter '" + key + "' is not a number: '" +
                  it->second + "'");
    }
  }

  int integer(const std::string& key, int fallback) {
    double v = number(key, fallback);
    if (v != std::floor(v))
      throw Error(model_ + ": parameter '" + key + "' must be an integer");
    return int(v);
  }

  std::string text(const std::string& key, const std::string& fallback) {
    used_.insert(key);
    auto it = raw_.find(key);
    return it == raw_.end() ? fallback : it->second;
  }

  void finish() const {
    for (const auto& [key, value] : raw_)
      if (!used_.count(key))
        throw Error(model_ + ": unknown parameter '" + key + "'");
  }

  std::map<std::string, std::string> record() const {
    std::map<std::string, std::string> rec = raw_;
    return rec;
  }

private:
  std::string model_;
  std::map<std::string, std::string> raw_;
  std::set<std::string> used_;
};

Matrix mat2(Complex a11, Complex a12, Complex a21, Complex a22) {
  Matrix m(2, 2);
  m << a11, a12, a21, a22;
  return m;
}

Matrix real_diag(std::initializer_list<double> d) {
  Matrix m = Matrix::Zero(Eigen::Index(d.size()), Eigen::Index(d.size()));
  int i = 0;
  for (double v : d) m(i, i) = v, ++i;
  return m;
}

MatrixPolynomial cst(const Matrix& a) { return MatrixPolynomial::constant(a); }

Matrix zero_cols(int rows) { return Matrix(rows, 0); }

/// Column matrix from a list of vectors.
Matrix span_of(const std::vector<Vector>& cols) {
  if (cols.empty()) return Matrix(0, 0);
  Matrix m(cols[0].size(), Eigen::Index(cols.size()));
  for (size_t j = 0; j < cols.size(); ++j) m.col(Eigen::Index(j)) = cols[j];
  return m;
}

/// Unit vector of length n with a block placed at a slot offset.
Vector placed(int n, int offset, const Vector& block) {
  Vector v = Vector::Zero(n);
  v.segment(offset, block.size()) = block;
  return v;
}

// Cyclic permutation acting as W[i][(i+1) mod n] = 1: u_e(length) = u_{e+1}(0).
RealMatrix cyclic_shift(int n) {
  RealMatrix w = RealMatrix::Zero(n, n);
  for (int i = 0; i < n; ++i) w(i, (i + 1) % n) = 1.0;
  return w;
}

Matrix graph_pair_basis(const RealMatrix& w) {
  const int n = int(w.rows());
  Matrix y = Matrix::Zero(2 * n, n);
  y.topRows(n).real() = RealMatrix::Identity(n, n);
  y.bottomRows(n).real() = w;
  return y;
}

SimSection default_sim(const std::string& kind, std::vector<int> comps,
                       double amplitude = 1.0, double offset = 0.0,
                       const std::string& scheme = "characteristic_upwind") {
  SimSection s;
  s.scheme = scheme;
  s.initial.kind = kind;
  s.initial.components = std::move(comps);
  s.initial.amplitude = amplitude;
  s.initial.offset = offset;
  s.initial.width = 0.12;
  s.initial.center = 0.5;
  return s;
}

// ---------------------------------------------------------------------------

ModelPreset transport_loop(Params& p) {
  const int n = p.integer("edges", 2);
  if (n < 1) throw Error("transport_loop: edges must be >= 1");
  const double c = p.number("c", 1.0);
  const double l = p.number("l", 1.0);
  std::vector<EdgeSpec> edges;
  std::vector<EdgeCoefficients> coeffs;
  std::vector<double> speeds(n, c);
  for (int i = 0; i < n; ++i)
    speeds[i] = p.number("c" + std::to_string(i + 1), speeds[i]);
  for (int i = 0; i < n; ++i) {
    edges.push_back({"e" + std::to_string(i + 1), "v" + std::to_string(i + 1),
                     "v" + std::to_string((i + 1) % n + 1), l, 1});
    Matrix m(1, 1), zero(1, 1), q(1, 1);
    m << speeds[i];
    zero << 0.0;
    q << 1.0;
    if (!(speeds[i] > 0.0)) throw Error("transport_loop: speeds must be positive");
    coeffs.push_back({cst(m), cst(zero), cst(q)});
  }
  ModelPreset preset;
  preset.system.graph = MetricGraph::build(edges);
  preset.system.coefficients = std::move(coeffs);
  preset.system.global = GlobalBoundary{graph_pair_basis(cyclic_shift(n))};
  preset.system.simulation = default_sim("sine", {});
  preset.summary =
      "scalar transport around a cycle; group through the endpoint fallback, "
      "unitary when all speeds coincide";
  return preset;
}

ModelPreset transport_network(Params& p) {
  const int n = p.integer("edges", 3);
  if (n < 2) throw Error("transport_network: edges must be >= 2");
  const double c = p.number("c", 1.0);
  const double mix = p.number("mixing", 0.0);
  if (mix < 0.0 || mix > 1.0)
    throw Error("transport_network: mixing must lie in [0, 1]");
  const double l = p.number("l", 1.0);
  RealMatrix shift = cyclic_shift(n);
  RealMatrix w = (1.0 - mix) * shift + mix * (shift * shift);
  if (std::abs(w.determinant()) < 1e-12)
    throw Error("transport_network: W must be invertible (column stochastic W "
                "with this mixing is singular)");
  std::vector<EdgeSpec> edges;
  std::vector<EdgeCoefficients> coeffs;
  for (int i = 0; i < n; ++i) {
    edges.push_back({"e" + std::to_string(i + 1), "v" + std::to_string(i + 1),
                     "v" + std::to_string((i + 1) % n + 1), l, 1});
    Matrix m(1, 1), zero(1, 1), q(1, 1);
    m << c;
    zero << 0.0;
    q << 1.0;
    if (!(c > 0.0)) throw Error("transport_network: c must be positive");
    coeffs.push_back({cst(m), cst(zero), cst(q)});
  }
  ModelPreset preset;
  preset.system.graph = MetricGraph::build(edges);
  preset.system.coefficients = std::move(coeffs);
  preset.system.global = GlobalBoundary{graph_pair_basis(w)};
  preset.system.simulation = default_sim("gaussian", {}, 1.0, 1.0);
  preset.summary =
      "diagonal transport with mass redistribution u(length) = W u(0), W column "
      "stochastic and invertible; contractive and positive";
  return preset;
}

ModelPreset telegrapher(Params& p) {
  const double L = p.number("L", 1.0);
  const double P = p.number("P", 1.0);
  const double G = p.number("G", 0.0);
  const double K = p.number("K", 0.0);
  const double H = p.number("H", 0.0);
  const double J = p.number("J", 0.0);
  const double l = p.number("l", 1.0);
  const double qa = p.number("Qa", P);
  const double qd = p.number("Qd", L);
  const double qb = p.number("Qb", 0.0);
  if (L * P == 0.0) throw Error("telegrapher: LP must be nonzero");

  ModelPreset preset;
  preset.system.graph = MetricGraph::build({{"e1", "v1", "v1", l, 2}});
  Matrix M = -mat2(0, L, P, 0);
  // damping G acts on the first component, K on the second
  Matrix N = -mat2(G, H, J, K);
  Matrix Q = mat2(qa, qb, qb, qd);
  preset.system.coefficients = {{cst(M), cst(N), cst(Q)}};
  // periodic traces at the loop vertex: (u(0), u(length)) with u(0) = u(length)
  Matrix Y = Matrix::Zero(4, 2);
  Y(0, 0) = Y(2, 0) = 1.0;
  Y(1, 1) = Y(3, 1) = 1.0;
  preset.system.local = LocalBoundary{{Y}};
  preset.system.simulation = default_sim("gaussian", {});
  preset.summary =
      "two-component line model on a loop with periodic traces; unitary group "
      "for G=K=H=J=0, contractive semigroup under nonnegative damping";
  return preset;
}

ModelPreset saint_venant_star(Params& p) {
  const double g = p.number("g", 10.0);
  const double H = p.number("H", 1.0);
  const double V = p.number("V", 1.0);
  const double cf = p.number("cf", 0.1);
  const int J = p.integer("J", 3);
  const double l = p.number("l", 1.0);
  const std::string steady = p.text("steady", "constant");
  std::string bc = p.text("bc", "auto");
  const double h1 = p.number("h1", 0.1);
  if (J < 2) throw Error("saint_venant_star: J must be >= 2");
  if (!(H > 0.0)) throw Error("saint_venant_star: H must be positive (H > 0)");
  const double disc = g * H - V * V;
  if (std::abs(disc) < 1e-12)
    throw Error("saint_venant_star: steady state is critical (gH - V^2 = 0)");
  const bool subcritical = disc > 0.0;
  if (bc == "auto") bc = subcritical ? "group" : "semigroup";
  if (bc == "group" && !subcritical)
    throw Error("saint_venant_star: the group construction needs the subcritical "
                "flow condition gH - V^2 > 0");
  if (bc == "semigroup" && subcritical)
    throw Error("saint_venant_star: the inflow/continuity construction needs the "
                "supercritical flow condition gH - V^2 < 0");
  if (!subcritical && !(V > 0.0))
    throw Error("saint_venant_star: the supercritical construction needs V > 0");
  if (steady != "constant" && steady != "affine")
    throw Error("saint_venant_star: steady must be 'constant' or 'affine'");
  if (steady == "affine" && bc == "group")
    throw Error("saint_venant_star: the group construction is built for constant "
                "steady states");

  // edge e1 runs v1 -> v0, the others v0 -> vj
  std::vector<EdgeSpec> edges;
  edges.push_back({"e1", "v1", "v0", l, 2});
  for (int j = 2; j <= J; ++j)
    edges.push_back({"e" + std::to_string(j), "v0", "v" + std::to_string(j), l, 2});

  auto coeff_for_edge = [&](double qscale) -> EdgeCoefficients {
    if (steady == "constant") {
      Matrix M = mat2(-V, -H, -g, -V);
      Matrix N = mat2(0, 0, cf * V * V / (H * H), -2.0 * cf * V / H);
      Matrix Q = qscale * real_diag({g, H});
      return {cst(M), cst(N), cst(Q)};
    }
    // affine water depth, discharge-conserving velocity fitted to low degree
    auto Hx = [&](double x) { return H + h1 * x; };
    auto Vx = [&](double x) { return V * H / Hx(x); };
    for (double x : sample_points(l)) {
      if (!(Hx(x) > 0.0))
        throw Error("saint_venant_star: affine steady state loses positivity of H");
      if ((g * Hx(x) - Vx(x) * Vx(x) > 0.0) == !subcritical)
        throw Error("saint_venant_star: flow regime changes along the edge");
    }
    auto fit = [&](const std::function<double(double)>& f, int deg) {
      return fit_scalar_polynomial(f, l, deg);
    };
    auto poly2x2 = [&](const std::vector<double>& a11, const std::vector<double>& a12,
                       const std::vector<double>& a21, const std::vector<double>& a22) {
      size_t deg = std::max({a11.size(), a12.size(), a21.size(), a22.size()});
      std::vector<Matrix> cs(deg, Matrix::Zero(2, 2));
      for (size_t d = 0; d < deg; ++d) {
        if (d < a11.size()) cs[d](0, 0) = a11[d];
        if (d < a12.size()) cs[d](0, 1) = a12[d];
        if (d < a21.size()) cs[d](1, 0) = a21[d];
        if (d < a22.size()) cs[d](1, 1) = a22[d];
      }
      return MatrixPolynomial(std::move(cs));
    };
    auto vprime = [&](double x) {
      return (Vx(x + 1e-6) - Vx(x - 1e-6)) / 2e-6;
    };
    MatrixPolynomial M = poly2x2(fit([&](double x) { return -Vx(x); }, 3),
                                 {-H, -h1}, {-g}, fit([&](double x) { return -Vx(x); }, 3));
    MatrixPolynomial N = poly2x2(
        fit([&](double x) { return -vprime(x); }, 3), {-h1},
        fit([&](double x) { return cf * Vx(x) * Vx(x) / (Hx(x) * Hx(x)); }, 3),
        fit([&](double x) { return -(vprime(x) + 2.0 * cf * Vx(x) / Hx(x)); }, 3));
    MatrixPolynomial Q = poly2x2({qscale * g}, {0.0}, {0.0}, {qscale * H, qscale * h1});
    return {MatrixPolynomial(M), MatrixPolynomial(N), MatrixPolynomial(Q)};
  };

  std::vector<EdgeCoefficients> coeffs;
  coeffs.push_back(coeff_for_edge(1.0));
  // In the supercritical regime the outgoing symmetrizers are scaled so the
  // continuity space at the junction sits inside the nonpositive cone.
  const double out_scale = subcritical ? 1.0 : 1.0 / double(J - 1);
  for (int j = 2; j <= J; ++j) coeffs.push_back(coeff_for_edge(out_scale));

  ModelPreset preset;
  preset.system.graph = MetricGraph::build(edges);
  preset.system.coefficients = std::move(coeffs);

  const int kv0 = 2 * J;
  std::vector<Matrix> Y(J + 1);  // vertex order: v1, v0, v2..vJ
  const MetricGraph& graph = preset.system.graph;
  const int v0 = graph.vertex_index("v0");
  const int v1 = graph.vertex_index("v1");

  if (bc == "semigroup") {
    if (steady == "constant") {
      // continuity of depth and velocity across the junction
      Vector c1 = Vector::Zero(kv0), c2 = Vector::Zero(kv0);
      for (int b = 0; b < J; ++b) {
        c1(2 * b) = 1.0;
        c2(2 * b + 1) = 1.0;
      }
      Y[v0] = span_of({c1, c2});
    } else {
      // decoupled nonpositive choice: the negative eigenspace of the junction
      // form (the endpoint matrices differ along an affine steady state, so
      // plain continuity leaves the cone)
      Matrix Tv0 = vertex_form_matrix(preset.system, v0);
      HermitianForm form = HermitianForm::validate(Tv0);
      Y[v0] = nonpositive_witness(form);
    }
    Y[v1] = zero_cols(2);
    for (int j = 2; j <= J; ++j)
      Y[graph.vertex_index("v" + std::to_string(j))] = Matrix::Identity(2, 2);
  } else {
    // isotropic pairing built from the eigenvectors of B = -(QM)
    Matrix B = mat2(g * V, g * H, g * H, H * V);
    Eigen::SelfAdjointEigenSolver<RealMatrix> es(B.real());
    const double lm = es.eigenvalues()(0);  // negative in the subcritical regime
    const double lp = es.eigenvalues()(1);
    Vector um = Vector(2), up = Vector(2);
    um.real() = es.eigenvectors().col(0);
    um.imag().setZero();
    up.real() = es.eigenvectors().col(1);
    up.imag().setZero();

    // external vertices: one isotropic direction each
    // v1 carries T = +B: pair (um, lm) with (up, lp)
    Y[v1] = span_of({um + std::sqrt(-lm / lp) * up});
    // vj carries T = -B: negative vector up (eig -lp), positive um (eig -lm)
    for (int j = 2; j <= J; ++j)
      Y[graph.vertex_index("v" + std::to_string(j))] =
          span_of({up + std::sqrt(lp / (-lm)) * um});

    // junction: cyclic pairing of negative with positive eigenvectors across
    // blocks; block 1 is the head of e1 (T-block -B), blocks 2..J tails (+B)
    auto block_neg = [&](int b) {  // (vector, eigenvalue)
      return b == 0 ? std::make_pair(up, -lp) : std::make_pair(um, lm);
    };
    auto block_pos = [&](int b) {
      return b == 0 ? std::make_pair(um, -lm) : std::make_pair(up, lp);
    };
    std::vector<Vector> pair_cols;
    for (int b = 0; b < J; ++b) {
      const int bn = (b + 1) % J;
      auto [wn, ln] = block_neg(b);
      auto [wp, lq] = block_pos(bn);
      const double alpha = std::sqrt(-ln / lq);
      Vector col = placed(kv0, 2 * b, wn) + alpha * placed(kv0, 2 * bn, wp);
      pair_cols.push_back(col);
    }
    Y[v0] = span_of(pair_cols);
  }

  preset.system.local = LocalBoundary{Y};
  preset.system.simulation =
      default_sim("gaussian", {}, 0.1, 0.0,
                  steady == "constant" ? "characteristic_upwind" : "local_lax_friedrichs");
  preset.summary = subcritical
                       ? "shallow water star, subcritical: group via isotropic "
                         "pairing, unitary iff V = 0, real, not positive"
                       : "shallow water star, supercritical: inflow/continuity/"
                         "outflow semigroup, real, not positive";
  return preset;
}

ModelPreset wave_star(Params& p) {
  const int J = p.integer("J", 3);
  if (J < 1) throw Error("wave_star: J must be >= 1");
  const double alpha = p.number("alpha", 0.0);
  const double beta = p.number("beta", 0.0);
  const double gamma = p.number("gamma", 0.0);
  const double kappa = p.number("kappa", 1.0);
  const double l = p.number("l", 1.0);
  const std::string tip = p.text("tip", "absorbing");
  if (tip != "absorbing" && tip != "dirichlet" && tip != "neumann")
    throw Error("wave_star: tip must be absorbing, dirichlet, or neumann");
  if (tip == "absorbing" && !(kappa >= alpha / 2.0))
    throw Error("wave_star: absorbing tip requires kappa >= alpha/2");

  std::vector<EdgeSpec> edges;
  std::vector<EdgeCoefficients> coeffs;
  for (int j = 1; j <= J; ++j) {
    edges.push_back({"e" + std::to_string(j), "v0", "v" + std::to_string(j), l, 2});
    Matrix M = mat2(0, 1, 1, alpha);
    Matrix N = mat2(0, 0, gamma, beta);
    coeffs.push_back({cst(M), cst(N), cst(Matrix::Identity(2, 2))});
  }
  ModelPreset preset;
  preset.system.graph = MetricGraph::build(edges);
  preset.system.coefficients = std::move(coeffs);

  const MetricGraph& graph = preset.system.graph;
  std::vector<Matrix> Y(graph.num_vertices());
  // center: continuity of the velocity component, signed balance of the
  // strain component
  {
    const int kv = 2 * J;
    std::vector<Vector> cols;
    Vector cont = Vector::Zero(kv);
    for (int b = 0; b < J; ++b) cont(2 * b + 1) = 1.0;
    cols.push_back(cont);
    for (int b = 0; b + 1 < J; ++b) {
      Vector d = Vector::Zero(kv);
      d(2 * b) = 1.0;
      d(2 * (b + 1)) = -1.0;
      cols.push_back(d);
    }
    Y[graph.vertex_index("v0")] = span_of(cols);
  }
  for (int j = 1; j <= J; ++j) {
    Vector t(2);
    if (tip == "absorbing")
      t << -kappa, 1.0;
    else if (tip == "dirichlet")
      t << 1.0, 0.0;
    else
      t << 0.0, 1.0;
    Y[graph.vertex_index("v" + std::to_string(j))] = span_of({t});
  }
  preset.system.local = LocalBoundary{Y};
  preset.system.simulation = default_sim("gaussian", {1});
  preset.summary = "elastic star; velocity continuity and strain balance at the "
                   "center, " + tip + " tips";
  return preset;
}

ModelPreset hybrid_transport_string(Params& p) {
  const double alpha = p.number("alpha", 1.0);
  const double beta = p.number("beta", 1.0);
  const double l1 = p.number("l1", 1.0);
  const double l2 = p.number("l2", 1.0);
  const bool sandwich = p.integer("sandwich", 0) != 0;
  const double gamma = p.number("gamma", 1.0);
  const double delta = p.number("delta", 0.5);
  if (!(2.0 * alpha * beta >= 1.0))
    throw Error("hybrid_transport_string: coupling requires 2*alpha*beta >= 1");
  if (beta == 0.0)
    throw Error("hybrid_transport_string: beta must be nonzero");
  if (sandwich) {
    if (!(2.0 * gamma * delta >= -1.0))
      throw Error("hybrid_transport_string: sandwich coupling requires "
                  "2*gamma*delta >= -1");
    if (gamma == 0.0)
      throw Error("hybrid_transport_string: gamma must be nonzero");
  }

  Matrix Mw = mat2(0, 1, 1, 0);
  Matrix Nw = Matrix::Zero(2, 2);
  Matrix mt(1, 1), nt(1, 1), qt(1, 1);
  mt << -1.0;
  nt << 0.0;
  qt << 1.0;

  ModelPreset preset;
  std::vector<EdgeSpec> edges;
  std::vector<EdgeCoefficients> coeffs;
  edges.push_back({"wave1", "v0", "w1", l2, 2});
  coeffs.push_back({cst(Mw), cst(Nw), cst(Matrix::Identity(2, 2))});
  edges.push_back({"transport", "v0", "t1", l1, 1});
  coeffs.push_back({cst(mt), cst(nt), cst(qt)});
  if (sandwich) {
    edges.push_back({"wave2", "t1", "w2", l2, 2});
    coeffs.push_back({cst(Mw), cst(Nw), cst(Matrix::Identity(2, 2))});
  }
  preset.system.graph = MetricGraph::build(edges);
  preset.system.coefficients = std::move(coeffs);

  const MetricGraph& graph = preset.system.graph;
  std::vector<Matrix> Y(graph.num_vertices());
  {
    Vector c(3);
    c << alpha, beta, 1.0;
    Y[graph.vertex_index("v0")] = span_of({c});
  }
  {
    Vector d(2);
    d << 1.0, 0.0;
    Y[graph.vertex_index("w1")] = span_of({d});
  }
  if (!sandwich) {
    Matrix full(1, 1);
    full << 1.0;
    Y[graph.vertex_index("t1")] = full;
  } else {
    // transport head meets the second string: trace order (p, v', vdot)
    Vector c(3);
    c << 1.0, gamma, delta;
    Y[graph.vertex_index("t1")] = span_of({c});
    Vector d(2);
    d << 1.0, 0.0;
    Y[graph.vertex_index("w2")] = span_of({d});
  }
  preset.system.local = LocalBoundary{Y};
  preset.system.simulation = default_sim("gaussian", {});
  preset.summary =
      sandwich ? "transport line sandwiched between two strings; the boundary "
                 "spaces sit in the nonpositive cone at the middle junction "
                 "only when 2*gamma*delta >= -1, and no maximality criterion "
                 "applies (classification stays undetermined)"
               : "string coupled to a transport line through its endpoint "
                 "values; quasi-contractive, real, not positive";
  return preset;
}

ModelPreset dirac_star(Params& p) {
  const int J = p.integer("J", 3);
  if (J < 1) throw Error("dirac_star: J must be >= 1");
  const double c = p.number("c", 1.0);
  const double mass = p.number("m", 1.0);
  const double hbar = p.number("hbar", 1.0);
  const double l = p.number("l", 1.0);
  const std::string family = p.text("family", "kirchhoff");
  const double b_diag = p.number("b_diag", 1.0);
  const double b_mix = p.number("b_mix", 0.0);
  if (family != "kirchhoff" && family != "swap" && family != "pointwise" &&
      family != "dissipative")
    throw Error("dirac_star: family must be kirchhoff, swap, pointwise, or "
                "dissipative");

  const Complex i(0.0, 1.0);
  Matrix M = mat2(0, i * c, -i * c, 0);
  Matrix N = mat2(-i * mass * c * c / hbar, 0, 0, i * mass * c * c / hbar);

  std::vector<EdgeSpec> edges;
  std::vector<EdgeCoefficients> coeffs;
  for (int j = 1; j <= J; ++j) {
    edges.push_back({"e" + std::to_string(j), "v0", "v" + std::to_string(j), l, 2});
    coeffs.push_back({cst(M), cst(N), cst(Matrix::Identity(2, 2))});
  }
  ModelPreset preset;
  preset.system.graph = MetricGraph::build(edges);
  preset.system.coefficients = std::move(coeffs);
  const MetricGraph& graph = preset.system.graph;

  // B for the dissipative family: purely imaginary spectrum, validated.
  Matrix B;
  if (family == "dissipative") {
    B = Matrix::Zero(J, J);
    for (int a = 0; a < J; ++a) B(a, a) = i * b_diag;
    if (J > 1 && b_mix != 0.0) {
      for (int a = 0; a + 1 < J; ++a) {
        B(a, a + 1) += b_mix;
        B(a + 1, a) -= b_mix;
      }
    }
    Eigen::ComplexEigenSolver<Matrix> es(B, false);
    const double worst = es.eigenvalues().real().cwiseAbs().maxCoeff();
    if (worst > 1e-9 * std::max(1.0, B.norm()))
      throw Error("dirac_star: B must have purely imaginary spectrum "
                  "(largest real part " + std::to_string(worst) + ")");
  }

  auto vertex_space = [&](int deg, const std::vector<int>& iotas) -> Matrix {
    const int kv = 2 * deg;
    std::vector<Vector> cols;
    if (family == "kirchhoff" || family == "swap") {
      const int cont = family == "kirchhoff" ? 0 : 1;  // continuous component
      const int kir = 1 - cont;
      Vector cv = Vector::Zero(kv);
      for (int b = 0; b < deg; ++b) cv(2 * b + cont) = 1.0;
      cols.push_back(cv);
      // basis of the signed-sum-zero space on the other component
      for (int b = 0; b + 1 < deg; ++b) {
        Vector d = Vector::Zero(kv);
        d(2 * b + kir) = 1.0 * iotas[b];
        d(2 * (b + 1) + kir) = -1.0 * iotas[b + 1];
        cols.push_back(d);
      }
    } else if (family == "pointwise") {
      for (int b = 0; b < deg; ++b) {
        Vector d = Vector::Zero(kv);
        d(2 * b) = 1.0;
        d(2 * b + 1) = 1.0;
        cols.push_back(d);
      }
    } else {  // dissipative: (i B eta, iota (.) eta)
      Matrix Bv;
      if (deg == J) {
        Bv = B;
      } else {
        Bv = Matrix::Zero(deg, deg);
        for (int a = 0; a < deg; ++a) Bv(a, a) = i * b_diag;
      }
      for (int m2 = 0; m2 < deg; ++m2) {
        Vector col = Vector::Zero(kv);
        for (int b = 0; b < deg; ++b) col(2 * b) = i * Bv(b, m2);
        col(2 * m2 + 1) = double(iotas[m2]);
        cols.push_back(col);
      }
    }
    return span_of(cols);
  };

  std::vector<Matrix> Y(graph.num_vertices());
  for (int v = 0; v < graph.num_vertices(); ++v) {
    const auto& slots = graph.vertex_slots(v);
    std::vector<int> iotas;
    for (const TraceSlot& s : slots)
      iotas.push_back(s.end == Endpoint::Tail ? -1 : +1);
    Y[v] = vertex_space(int(slots.size()), iotas);
  }
  preset.system.local = LocalBoundary{Y};
  preset.system.simulation = default_sim("gaussian", {0});
  preset.summary = "two-component relativistic star, " + family +
                   " vertex family; group (unitary for the conservative "
                   "families), never real";
  return preset;
}

ModelPreset second_sound(Params& p) {
  const double alpha = p.number("alpha", 1.0);
  const double beta = p.number("beta", 1.0);
  const double gamma = p.number("gamma", 1.0);
  const double delta = p.number("delta", 1.0);
  const double tau0 = p.number("tau0", 1.0);
  const double kappa = p.number("kappa", 1.0);
  const double l = p.number("l", 1.0);
  const int J = p.integer("J", 3);
  const double bcoef = p.number("b", 1.0);
  const double ccoef = p.number("cdiag", 1.0);
  const std::string family = p.text("family", "i");
  for (auto [name, val] : std::initializer_list<std::pair<const char*, double>>{
           {"alpha", alpha}, {"beta", beta}, {"gamma", gamma},
           {"delta", delta}, {"tau0", tau0}, {"kappa", kappa}})
    if (!(val > 0.0))
      throw Error("second_sound: parameter " + std::string(name) +
                  " must be positive");
  if (family == "iii")
    throw Error("second_sound: family 'iii' imposes a dynamic boundary condition "
                "at x = 0, which this toolkit does not model");
  if (family != "i" && family != "ii" && family != "periodic" &&
      family != "net_zq" && family != "net_zptheta" && family != "dissipative")
    throw Error("second_sound: family must be one of i, ii, periodic, net_zq, "
                "net_zptheta, dissipative");

  Matrix M = Matrix::Zero(4, 4);
  M(0, 1) = 1.0;
  M(1, 0) = alpha;
  M(1, 2) = -beta;
  M(2, 1) = -delta;
  M(2, 3) = -gamma;
  M(3, 2) = -kappa / tau0;
  Matrix Q = real_diag({alpha * delta, delta, beta, beta * gamma * tau0 / kappa});
  Matrix N = Matrix::Zero(4, 4);
  N(3, 3) = -1.0 / tau0;
  EdgeCoefficients coeff{cst(M), cst(N), cst(Q)};

  ModelPreset preset;
  auto& sys = preset.system;

  const bool net = family == "net_zq" || family == "net_zptheta";
  if (family == "periodic") {
    sys.graph = MetricGraph::build({{"e1", "v1", "v1", l, 4}});
    sys.coefficients = {coeff};
    Matrix Y = Matrix::Zero(8, 4);
    Y.topRows(4) = Matrix::Identity(4, 4);
    Y.bottomRows(4) = Matrix::Identity(4, 4);
    sys.local = LocalBoundary{{Y}};
  } else if (net) {
    std::vector<EdgeSpec> edges;
    std::vector<EdgeCoefficients> coeffs;
    for (int j = 1; j <= J; ++j) {
      edges.push_back({"e" + std::to_string(j), "v0", "v" + std::to_string(j), l, 4});
      coeffs.push_back(coeff);
    }
    sys.graph = MetricGraph::build(edges);
    sys.coefficients = std::move(coeffs);
    std::vector<Matrix> Y(sys.graph.num_vertices());
    // components: 0=z', 1=zdot, 2=theta, 3=q
    const std::vector<int> cont = family == "net_zq" ? std::vector<int>{1, 3}
                                                     : std::vector<int>{0, 2};
    const std::vector<int> kirch = family == "net_zq" ? std::vector<int>{0, 2}
                                                      : std::vector<int>{1, 3};
    {
      const int kv = 4 * J;
      std::vector<Vector> cols;
      for (int comp : cont) {
        Vector v = Vector::Zero(kv);
        for (int b = 0; b < J; ++b) v(4 * b + comp) = 1.0;
        cols.push_back(v);
      }
      for (int comp : kirch)
        for (int b = 0; b + 1 < J; ++b) {
          Vector v = Vector::Zero(kv);
          v(4 * b + comp) = 1.0;
          v(4 * (b + 1) + comp) = -1.0;
          cols.push_back(v);
        }
      Y[sys.graph.vertex_index("v0")] = span_of(cols);
    }
    for (int j = 1; j <= J; ++j) {
      // degree one: continuity is void, the signed sums pin the two
      // Kirchhoff components to zero
      std::vector<Vector> cols;
      for (int comp : cont) {
        Vector v = Vector::Zero(4);
        v(comp) = 1.0;
        cols.push_back(v);
      }
      Y[sys.graph.vertex_index("v" + std::to_string(j))] = span_of(cols);
    }
    sys.local = LocalBoundary{Y};
  } else if (family == "dissipative") {
    sys.graph = MetricGraph::build({{"e1", "v0", "v1", l, 4}});
    sys.coefficients = {coeff};
    // rows of the constraint: Z1 = B Z2 and Z2 + Qf = -C Theta with
    // B = -b I, C = -c I, in the weighted endpoint variables
    RealMatrix A = RealMatrix::Zero(4, 8);
    // Z1 + b Z2 = 0
    A(0, 0) = -alpha;
    A(0, 1) = bcoef * delta;
    A(1, 4) = alpha;
    A(1, 5) = bcoef * delta;
    // Z2 + Qf - c Theta = 0
    A(2, 1) = delta;
    A(2, 3) = gamma;
    A(2, 2) = ccoef * beta;
    A(3, 5) = delta;
    A(3, 7) = gamma;
    A(3, 6) = -ccoef * beta;
    Matrix Ac(4, 8);
    Ac.real() = A;
    Ac.imag().setZero();
    sys.global = GlobalBoundary{orthonormal_complement(Ac.adjoint())};
  } else {
    sys.graph = MetricGraph::build({{"e1", "v0", "v1", l, 4}});
    sys.coefficients = {coeff};
    std::vector<Vector> cols;
    Vector a = Vector::Zero(4), b = Vector::Zero(4);
    if (family == "i") {
      a(0) = 1.0;  // z' free
      b(2) = 1.0;  // theta free
    } else {
      a(0) = 1.0;  // z' free
      b(3) = 1.0;  // q free
    }
    Matrix Yend = span_of({a, b});
    sys.local = LocalBoundary{{Yend, Yend}};
  }

  const double Hc = alpha * alpha * delta * delta + beta * beta * delta * delta +
                    beta * beta * gamma * gamma;
  const double Kc = Hc * Hc - 4.0 * std::pow(alpha * beta * gamma * delta, 2.0);
  std::ostringstream note;
  note << "flux spectrum: computed QM eigenvalues match +-sqrt((H +- sqrt(K))/2) "
          "with H = a^2 d^2 + b^2 d^2 + b^2 g^2 = "
       << Hc << " and K = H^2 - 4 (a b g d)^2 = " << Kc
       << " (a,b,g,d = alpha,beta,gamma,delta); the closed form with 2*sqrt(K) "
          "inside does not match the computed spectrum";
  preset.system.notes.push_back(note.str());

  preset.system.simulation = default_sim("gaussian", {});
  preset.summary = "thermoelastic heat-wave model, family " + family +
                   "; group for the conservative families, contractive for the "
                   "dissipative one, real, never positive";
  return preset;
}

}  // namespace

const std::vector<std::string>& model_names() {
  static const std::vector<std::string> names = {
      "transport_loop",   "transport_network", "telegrapher",
      "saint_venant_star", "wave_star",         "hybrid_transport_string",
      "dirac_star",       "second_sound"};
  return names;
}

ModelPreset make_model(const std::string& name,
                       const std::map<std::string, std::string>& params) {
  Params p(name, params);
  ModelPreset preset;
  if (name == "transport_loop")
    preset = transport_loop(p);
  else if (name == "transport_network")
    preset = transport_network(p);
  else if (name == "telegrapher")
    preset = telegrapher(p);
  else if (name == "saint_venant_star")
    preset = saint_venant_star(p);
  else if (name == "wave_star")
    preset = wave_star(p);
  else if (name == "hybrid_transport_string")
    preset = hybrid_transport_string(p);
  else if (name == "dirac_star")
    preset = dirac_star(p);
  else if (name == "second_sound")
    preset = second_sound(p);
  else
    throw Error("models: unknown model '" + name + "'");
  p.finish();
  preset.name = name;
  preset.params = p.record();
  validate_system(preset.system);
  return preset;
}

}  // namespace netwave
