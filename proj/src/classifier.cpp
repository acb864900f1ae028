#include "netwave/classifier.hpp"

#include <Eigen/LU>
#include <cmath>
#include <random>
#include <sstream>

#include "netwave/linalg.hpp"

namespace netwave {

namespace {

double spectral_norm_hermitian(const Matrix& a) {
  double lmin, lmax;
  hermitian_eigen_range(a, lmin, lmax);
  return std::max(std::abs(lmin), std::abs(lmax));
}

struct PointwiseScan {
  double worst = -std::numeric_limits<double>::infinity();
  int edge = -1;
  double x = 0.0;
  double scale = 0.0;
};

// sup over edges and sample points of f(values, x); scale collects the
// largest norm seen, for relative thresholds.
template <typename F>
PointwiseScan scan_edges(const System& sys, F&& f) {
  PointwiseScan s;
  for (int e = 0; e < sys.graph.num_edges(); ++e) {
    const EdgeCoefficients& c = sys.coefficients[e];
    const double len = sys.graph.edge(e).length;
    MatrixPolynomial qm = c.qm();
    MatrixPolynomial qn = c.q() * c.N;
    MatrixPolynomial qm_prime = qm.derivative();
    for (double x : sample_points(len)) {
      Matrix qnx = qn.eval(x);
      Matrix qmpx = qm_prime.eval(x);
      s.scale = std::max({s.scale, qnx.norm(), qmpx.norm()});
      const double val = f(c, x, qnx, qmpx);
      if (val > s.worst) {
        s.worst = val;
        s.edge = e;
        s.x = x;
      }
    }
  }
  return s;
}

std::string at_edge(const System& sys, int e, double x) {
  std::ostringstream os;
  os << "edge '" << sys.graph.edge(e).id << "' at x=" << x;
  return os.str();
}

double classification_tol(const System& sys, double scale) {
  return sys.tol.check_rel * std::max(1.0, scale);
}

// ---- pointwise coefficient predicates ------------------------------------

struct CoeffFacts {
  bool q_real = true, m_real = true, n_real = true;
  bool q_diagonal_positive = true;
  bool m_diagonal = true;
  double n_offdiag_min = std::numeric_limits<double>::infinity();
  int witness_edge = -1;
  double witness_x = 0.0;
  std::string witness_what;
};

CoeffFacts scan_coefficients(const System& sys) {
  CoeffFacts f;
  for (int e = 0; e < sys.graph.num_edges(); ++e) {
    const EdgeCoefficients& c = sys.coefficients[e];
    const double len = sys.graph.edge(e).length;
    double m_scale = 0.0, n_scale = 0.0, q_scale = 0.0;
    for (double x : sample_points(len)) {
      m_scale = std::max(m_scale, c.M.eval(x).norm());
      n_scale = std::max(n_scale, c.N.eval(x).norm());
      q_scale = std::max(q_scale, c.q().eval(x).norm());
    }
    for (double x : sample_points(len)) {
      Matrix M = c.M.eval(x), N = c.N.eval(x), Q = c.q().eval(x);
      auto note = [&](bool& flag, const char* what) {
        if (flag) {
          flag = false;
          if (f.witness_edge < 0) {
            f.witness_edge = e;
            f.witness_x = x;
            f.witness_what = what;
          }
        }
      };
      if (M.imag().cwiseAbs().maxCoeff() > classification_tol(sys, m_scale))
        note(f.m_real, "M has a nonreal entry");
      if (N.imag().cwiseAbs().maxCoeff() > classification_tol(sys, n_scale))
        note(f.n_real, "N has a nonreal entry");
      if (Q.imag().cwiseAbs().maxCoeff() > classification_tol(sys, q_scale))
        note(f.q_real, "Q has a nonreal entry");
      Matrix m_off = M - Matrix(M.diagonal().asDiagonal());
      if (m_off.cwiseAbs().maxCoeff() > classification_tol(sys, m_scale))
        note(f.m_diagonal, "M has an off-diagonal entry");
      Matrix q_off = Q - Matrix(Q.diagonal().asDiagonal());
      if (q_off.cwiseAbs().maxCoeff() > classification_tol(sys, q_scale) ||
          Q.diagonal().real().minCoeff() <= 0.0)
        note(f.q_diagonal_positive, "Q is not diagonal with positive entries");
      for (int i = 0; i < N.rows(); ++i)
        for (int j = 0; j < N.cols(); ++j)
          if (i != j) f.n_offdiag_min = std::min(f.n_offdiag_min, N(i, j).real());
    }
  }
  return f;
}

// ---- boundary-space predicates --------------------------------------------

bool real_spannable(const Matrix& Y) {
  if (Y.cols() == 0) return true;
  RealMatrix both(Y.rows(), 2 * Y.cols());
  both << Y.real(), Y.imag();
  Matrix c(both.rows(), both.cols());
  c.real() = both;
  c.imag().setZero();
  return numeric_rank(c) == numeric_rank(Y);
}

bool nonnegative_spanning_certificate(const Matrix& Y) {
  if (Y.cols() == 0) return true;
  const double tiny = 1e-12 * std::max(1.0, Y.norm());
  for (Eigen::Index j = 0; j < Y.cols(); ++j)
    for (Eigen::Index i = 0; i < Y.rows(); ++i) {
      if (std::abs(Y(i, j).imag()) > tiny) return false;
      if (Y(i, j).real() < -tiny) return false;
    }
  return true;
}

// Sampling test for positive-part closure: random real combinations of a
// real spanning set must have their positive part inside the span.
bool closure_sampling_test(const Matrix& Y, double tol, double* worst_residual) {
  *worst_residual = 0.0;
  if (Y.cols() == 0) return true;
  RealMatrix both(Y.rows(), 2 * Y.cols());
  both << Y.real(), Y.imag();
  Matrix span(both.rows(), both.cols());
  span.real() = both;
  span.imag().setZero();
  Matrix q = orthonormal_basis(span);
  std::mt19937_64 rng(0x900d5eedULL);
  std::normal_distribution<double> gauss;
  for (int trial = 0; trial < 200; ++trial) {
    Vector xi = Vector::Zero(Y.rows());
    for (Eigen::Index j = 0; j < q.cols(); ++j) xi += gauss(rng) * q.col(j);
    Vector plus(xi.size());
    for (Eigen::Index i = 0; i < xi.size(); ++i)
      plus(i) = Complex(std::max(xi(i).real(), 0.0), 0.0);
    Vector res = plus - q * (q.adjoint() * plus);
    const double r = res.norm() / std::max(1.0, plus.norm());
    *worst_residual = std::max(*worst_residual, r);
    if (r > tol) return false;
  }
  return true;
}

bool is_null(ConeClass c) { return c == ConeClass::Null; }
bool is_nonpositive(ConeClass c) {
  return c == ConeClass::Null || c == ConeClass::Nonpositive;
}
bool is_nonnegative(ConeClass c) {
  return c == ConeClass::Null || c == ConeClass::Nonnegative;
}

}  // namespace

WellPosednessReport classify(const System& sys) {
  WellPosednessReport rep;
  rep.assumptions = check_assumptions(sys);
  if (!rep.assumptions.passed())
    throw Error("classifier: standing assumptions failed: " +
                rep.assumptions.describe(sys));
  rep.notes = sys.notes;

  // Quasi-dissipativity bound.
  {
    double qm_prime_sup = 0.0, qn_sup = 0.0;
    for (int e = 0; e < sys.graph.num_edges(); ++e) {
      const EdgeCoefficients& c = sys.coefficients[e];
      MatrixPolynomial qmp = c.qm().derivative();
      MatrixPolynomial qn = c.q() * c.N;
      for (double x : sample_points(sys.graph.edge(e).length)) {
        qm_prime_sup = std::max(qm_prime_sup, spectral_norm_hermitian(qmp.eval(x)));
        Matrix h = qn.eval(x);
        qn_sup = std::max(qn_sup, spectral_norm_hermitian(h + h.adjoint()) / 2.0);
      }
    }
    rep.omega = 0.5 * qm_prime_sup + qn_sup;
  }

  const Tolerances& tol = sys.tol;

  // ---- boundary geometry ---------------------------------------------------
  bool all_y_null = true, all_y_nonpos = true;
  bool all_adj_null = true, all_adj_nonneg = true;
  bool basis_ok = false;
  bool dims_ok = false;
  int dim_sum = 0;
  const int k = sys.graph.total_dim();
  bool fallback_fires = false;

  if (sys.has_local()) {
    for (int v = 0; v < sys.graph.num_vertices(); ++v) {
      HermitianForm Tv;
      try {
        Tv = HermitianForm::validate(vertex_form_matrix(sys, v), tol);
      } catch (const Error& err) {
        throw Error("classifier: vertex form at '" + sys.graph.vertex_id(v) +
                    "' is invalid after assumption checks (internal inconsistency): " +
                    err.what());
      }
      ConeReport yc = classify_subspace(Tv, sys.local->Y[v], tol);
      ConeReport ac = classify_subspace(Tv, adjoint_bc_space(sys, v), tol);
      rep.vertex_details.push_back({sys.graph.vertex_id(v), int(sys.local->Y[v].cols()),
                                    yc.cls, ac.cls});
      all_y_null &= is_null(yc.cls);
      all_y_nonpos &= is_nonpositive(yc.cls);
      all_adj_null &= is_null(ac.cls);
      all_adj_nonneg &= is_nonnegative(ac.cls);
    }
    rep.dimension = check_local_dimension_condition(sys);
    basis_ok = rep.dimension->ok();
    dims_ok = rep.dimension->dims_ok;
    dim_sum = rep.dimension->dim_sum;
  } else {
    HermitianForm Tg = HermitianForm::validate(global_form_matrix(sys), tol);
    ConeReport yc = classify_subspace(Tg, sys.global->Y, tol);
    rep.global_y_class = yc.cls;
    all_y_null = is_null(yc.cls);
    all_y_nonpos = is_nonpositive(yc.cls);
    Matrix W = orthonormal_complement(sys.global->Y);
    Matrix adj = orthonormal_basis(Tg.P.partialPivLu().solve(W));
    ConeReport ac = classify_subspace(Tg, adj, tol);
    all_adj_null = is_null(ac.cls);
    all_adj_nonneg = is_nonnegative(ac.cls);
    rep.global_report = check_global_conditions(sys, sys.global->Y);
    basis_ok = rep.global_report->basis_global;
    dim_sum = rep.global_report->dim_Y;
    dims_ok = (dim_sum == k);
    fallback_fires =
        rep.global_report->infty_applicable && rep.global_report->basis_global_infty;
  }

  const bool local = sys.has_local();
  const std::string prefix = local ? "" : "global_";

  // ---- group ---------------------------------------------------------------
  if (all_y_null && basis_ok) {
    rep.group = Verdict::Yes;
    rep.group_evidence = {prefix + "isotropic_basis",
                          local ? "all boundary spaces totally isotropic and the "
                                  "dimension/independence condition holds"
                                : "Y totally isotropic, dim Y^perp = k and Y meets "
                                  "the diagonal subspace trivially",
                          local ? rep.dimension->margin : rep.global_report->margin_basis};
  } else if (all_y_null && fallback_fires) {
    rep.group = Verdict::Yes;
    rep.group_evidence = {"global_isotropic_fallback",
                          "Y totally isotropic; endpoint criterion dim Pi_ell Y^perp = k "
                          "holds and every edge is diagonal or constant SPD",
                          rep.global_report->margin_infty};
  } else if (all_y_null && all_adj_null) {
    rep.group = Verdict::Yes;
    rep.group_evidence = {prefix + "isotropic_adjoint",
                          "boundary spaces and their adjoint trace spaces are all "
                          "totally isotropic",
                          0.0};
  } else if (all_y_null && !dims_ok) {
    std::ostringstream os;
    os << "dimension count failed: " << (local ? "sum of dim Y_v" : "dim Y") << " = "
       << dim_sum << " != k = " << k;
    rep.group = Verdict::No;
    rep.group_evidence = {prefix + "dimension_count", os.str(), 0.0};
  } else if (!all_y_null) {
    rep.group = Verdict::Undetermined;
    rep.group_evidence = {"not_isotropic",
                          "some boundary space is not totally isotropic; no group "
                          "criterion applies",
                          0.0};
  } else {
    rep.group = Verdict::Undetermined;
    rep.group_evidence = {"no_group_route",
                          "isotropic boundary spaces, but neither the independence "
                          "condition nor adjoint isotropy could be verified",
                          0.0};
  }

  // ---- quasi-contractive semigroup ------------------------------------------
  if (rep.group == Verdict::Yes) {
    rep.quasi_contractive_semigroup = Verdict::Yes;
    rep.quasi_contractive_evidence = {"from_group", "group generation implies a "
                                      "quasi-contractive semigroup", 0.0};
  } else if (all_y_nonpos && basis_ok) {
    rep.quasi_contractive_semigroup = Verdict::Yes;
    rep.quasi_contractive_evidence = {prefix + "nonpositive_basis",
                                      "boundary spaces inside the nonpositive cone and "
                                      "the dimension/independence condition holds",
                                      0.0};
  } else if (all_y_nonpos && fallback_fires) {
    rep.quasi_contractive_semigroup = Verdict::Yes;
    rep.quasi_contractive_evidence = {"global_nonpositive_fallback",
                                      "Y inside the nonpositive cone; endpoint "
                                      "criterion holds on diagonal/constant-SPD edges",
                                      rep.global_report->margin_infty};
  } else if (all_y_nonpos && all_adj_nonneg) {
    rep.quasi_contractive_semigroup = Verdict::Yes;
    rep.quasi_contractive_evidence = {prefix + "nonpositive_adjoint",
                                      "boundary spaces in the nonpositive cone, adjoint "
                                      "trace spaces in the nonnegative cone",
                                      0.0};
  } else {
    rep.quasi_contractive_semigroup = Verdict::Undetermined;
    rep.quasi_contractive_evidence = {"no_semigroup_route",
                                      all_y_nonpos
                                          ? "nonpositive boundary spaces, but no "
                                            "maximality criterion could be verified"
                                          : "some boundary space is not inside the "
                                            "nonpositive cone",
                                      0.0};
  }

  // ---- unitary ---------------------------------------------------------------
  PointwiseScan iso = scan_edges(
      sys, [](const EdgeCoefficients&, double, const Matrix& qn, const Matrix& qmp) {
        return (qn + qn.adjoint() - qmp).norm();
      });
  if (rep.group == Verdict::Yes) {
    if (iso.worst <= classification_tol(sys, iso.scale)) {
      rep.unitary_group = Verdict::Yes;
      rep.unitary_evidence = {"energy_balance",
                              "QN + (QN)* = (QM)' at every sample point; energy is "
                              "conserved",
                              classification_tol(sys, iso.scale) - iso.worst};
      rep.energy_conserved = true;
    } else {
      rep.unitary_group = Verdict::No;
      rep.unitary_evidence = {"energy_balance",
                              "residual ||QN + (QN)* - (QM)'|| = " +
                                  std::to_string(iso.worst) + " at " +
                                  at_edge(sys, iso.edge, iso.x),
                              iso.worst};
    }
  } else if (rep.group == Verdict::No) {
    rep.unitary_group = Verdict::No;
    rep.unitary_evidence = {"requires_group", "no group, hence no unitary group", 0.0};
  } else {
    rep.unitary_group = Verdict::Undetermined;
    rep.unitary_evidence = {"requires_group", "group generation undetermined", 0.0};
  }

  // ---- contractive -------------------------------------------------------------
  PointwiseScan dissip = scan_edges(
      sys, [](const EdgeCoefficients&, double, const Matrix& qn, const Matrix& qmp) {
        double lmin, lmax;
        hermitian_eigen_range(qn + qn.adjoint() - qmp, lmin, lmax);
        return lmax;
      });
  if (rep.quasi_contractive_semigroup == Verdict::Yes) {
    if (dissip.worst <= classification_tol(sys, dissip.scale)) {
      rep.contractive_semigroup = Verdict::Yes;
      rep.contractive_evidence = {"dissipation_matrix",
                                  "QN + (QN)* - (QM)' is negative semidefinite at every "
                                  "sample point",
                                  classification_tol(sys, dissip.scale) - dissip.worst};
    } else {
      rep.contractive_semigroup = Verdict::No;
      rep.contractive_evidence = {"dissipation_matrix",
                                  "largest eigenvalue " + std::to_string(dissip.worst) +
                                      " at " + at_edge(sys, dissip.edge, dissip.x),
                                  dissip.worst};
    }
  } else {
    rep.contractive_semigroup = Verdict::Undetermined;
    rep.contractive_evidence = {"requires_semigroup",
                                "quasi-contractive generation undetermined", 0.0};
  }

  // ---- real ---------------------------------------------------------------------
  CoeffFacts facts = scan_coefficients(sys);
  const bool generation_certified = rep.group == Verdict::Yes ||
                                    rep.quasi_contractive_semigroup == Verdict::Yes;
  bool y_real_spannable = true;
  if (sys.has_local()) {
    for (const Matrix& Y : sys.local->Y) y_real_spannable &= real_spannable(Y);
  } else {
    y_real_spannable = real_spannable(sys.global->Y);
  }
  if (!sys.has_local() && generation_certified && facts.q_real)
    rep.notes.push_back(
        "reality criterion applied to a global boundary space; the real-span "
        "condition is formulated vertexwise for local conditions");
  if (!generation_certified) {
    rep.real = Verdict::Undetermined;
    rep.real_evidence = {"requires_semigroup", "no generation verdict to qualify", 0.0};
  } else if (!facts.q_real) {
    rep.real = Verdict::Undetermined;
    rep.real_evidence = {"not_applicable", "criterion requires real-valued Q", 0.0};
  } else if (!y_real_spannable) {
    rep.real = Verdict::Undetermined;
    rep.real_evidence = {"real_span",
                         "a boundary space admits no real spanning set; criterion "
                         "does not apply",
                         0.0};
  } else if (facts.m_real && facts.n_real) {
    rep.real = Verdict::Yes;
    rep.real_evidence = {"real_coefficients",
                         "boundary spaces have real spanning sets and M, N are real "
                         "at every sample point",
                         0.0};
  } else {
    rep.real = Verdict::No;
    rep.real_evidence = {"real_coefficients",
                         facts.witness_what + " at " +
                             at_edge(sys, facts.witness_edge, facts.witness_x),
                         0.0};
  }

  // ---- positive --------------------------------------------------------------------
  if (rep.real == Verdict::No) {
    rep.positive = Verdict::No;
    rep.positive_evidence = {"requires_real",
                             "a positive semigroup preserves real data; reality fails",
                             0.0};
  } else if (rep.real == Verdict::Undetermined) {
    rep.positive = Verdict::Undetermined;
    rep.positive_evidence = {"requires_real", "reality undetermined", 0.0};
  } else if (!facts.q_diagonal_positive) {
    rep.positive = Verdict::Undetermined;
    rep.positive_evidence = {"not_applicable",
                             "criterion requires diagonal Q with positive entries", 0.0};
  } else if (!facts.m_diagonal) {
    rep.positive = Verdict::No;
    rep.positive_evidence = {"interior_necessity",
                             "M is not diagonal (" + facts.witness_what + " at " +
                                 at_edge(sys, facts.witness_edge, facts.witness_x) +
                                 "); interior comparison rules positivity out",
                             0.0};
  } else if (facts.n_offdiag_min < -classification_tol(sys, 1.0)) {
    rep.positive = Verdict::No;
    rep.positive_evidence = {"interior_necessity",
                             "N has a negative off-diagonal entry (min " +
                                 std::to_string(facts.n_offdiag_min) + ")",
                             facts.n_offdiag_min};
  } else {
    // Boundary side: exact nonnegative-spanning certificate, else sampling.
    bool certified = true;
    bool sampled = false;
    double worst = 0.0;
    bool closure_ok = true;
    auto inspect = [&](const Matrix& Y) {
      if (!closure_ok) return;
      if (nonnegative_spanning_certificate(Y)) return;
      sampled = true;
      double r = 0.0;
      certified = false;
      if (!closure_sampling_test(Y, tol.subspace_rel, &r)) closure_ok = false;
      worst = std::max(worst, r);
    };
    if (sys.has_local())
      for (const Matrix& Y : sys.local->Y) inspect(Y);
    else
      inspect(sys.global->Y);

    if (!closure_ok) {
      rep.positive = Verdict::Undetermined;
      rep.positive_evidence = {"closure_violated",
                               "a sampled boundary vector has its positive part outside "
                               "the boundary space (residual " +
                                   std::to_string(worst) + ")",
                               worst};
    } else {
      rep.positive = Verdict::Yes;
      rep.positive_evidence = {
          certified ? "nonnegative_spanning" : "closure_sampled",
          certified ? "boundary spaces spanned by entrywise-nonnegative vectors; "
                      "M diagonal, N off-diagonal nonnegative"
                    : "positive-part closure verified by sampling only (200 trials); "
                      "M diagonal, N off-diagonal nonnegative",
          0.0};
      if (sampled && certified == false)
        rep.notes.push_back("positivity closure certified by sampling, not exactly");
    }
  }

  return rep;
}

Verdict check_unitary(const System& sys) { return classify(sys).unitary_group; }
Verdict check_contractive(const System& sys) { return classify(sys).contractive_semigroup; }
Verdict check_real(const System& sys) { return classify(sys).real; }
Verdict check_positive(const System& sys) { return classify(sys).positive; }

}  // namespace netwave
