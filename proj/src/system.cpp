#include "netwave/system.hpp"

#include "netwave/linalg.hpp"

namespace netwave {

void validate_system(System& sys) {
  const MetricGraph& g = sys.graph;
  if (int(sys.coefficients.size()) != g.num_edges())
    throw Error("system: coefficients must cover every edge");

  for (int e = 0; e < g.num_edges(); ++e) {
    EdgeCoefficients& c = sys.coefficients[e];
    const int ke = g.edge(e).block_size;
    const std::string& id = g.edge(e).id;
    if (c.M.dim() != ke)
      throw Error("system: edge '" + id + "' M size does not match block size");
    if (c.N.dim() != ke)
      throw Error("system: edge '" + id + "' N size does not match block size");
    if (c.M.degree() > 3 || c.N.degree() > 3)
      throw Error("system: edge '" + id + "' coefficient degree exceeds 3");
    if (c.Q) {
      if (c.Q->dim() != ke)
        throw Error("system: edge '" + id + "' Q size does not match block size");
      if (c.Q->degree() > 3)
        throw Error("system: edge '" + id + "' coefficient degree exceeds 3");
    } else {
      if (!c.M.is_constant())
        throw Error("system: edge '" + id +
                    "' has variable M and no symmetrizer Q; supply Q explicitly");
      c.Q = MatrixPolynomial::constant(
          synthesize_symmetrizer(c.M.eval(0.0), sys.tol));
      c.q_synthesized = true;
    }
  }

  if (sys.has_local() == sys.has_global())
    throw Error("system: exactly one of local or global boundary conditions required");

  if (sys.has_local()) {
    if (int(sys.local->Y.size()) != g.num_vertices())
      throw Error("system: local boundary conditions must cover every vertex");
    for (int v = 0; v < g.num_vertices(); ++v) {
      const Matrix& Y = sys.local->Y[v];
      if (int(Y.rows()) != g.vertex_dim(v))
        throw Error("system: Y at vertex '" + g.vertex_id(v) +
                    "' has wrong trace dimension");
      if (Y.cols() > 0 && numeric_rank(Y) != Y.cols())
        throw Error("system: Y at vertex '" + g.vertex_id(v) +
                    "' does not have full column rank");
    }
  } else {
    const Matrix& Y = sys.global->Y;
    if (int(Y.rows()) != 2 * g.total_dim())
      throw Error("system: global Y must live in C^(2k)");
    if (Y.cols() > 0 && numeric_rank(Y) != Y.cols())
      throw Error("system: global Y does not have full column rank");
  }
}

}  // namespace netwave
