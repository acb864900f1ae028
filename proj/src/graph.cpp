#include "netwave/graph.hpp"

#include <set>

namespace netwave {

MetricGraph MetricGraph::build(std::vector<EdgeSpec> edges,
                               std::vector<std::string> declared_vertices) {
  if (edges.empty()) throw Error("graph: edge list is empty");

  MetricGraph g;
  g.edges_ = std::move(edges);

  const bool explicit_vertices = !declared_vertices.empty();
  if (explicit_vertices) {
    for (const auto& vid : declared_vertices) {
      if (g.vertex_lookup_.count(vid))
        throw Error("graph: duplicate vertex id '" + vid + "'");
      g.vertex_lookup_[vid] = int(g.vertices_.size());
      g.vertices_.push_back(vid);
    }
  }

  auto intern_vertex = [&](const std::string& vid) -> int {
    auto it = g.vertex_lookup_.find(vid);
    if (it != g.vertex_lookup_.end()) return it->second;
    if (explicit_vertices)
      throw Error("graph: edge endpoint '" + vid + "' is not a declared vertex");
    int idx = int(g.vertices_.size());
    g.vertex_lookup_[vid] = idx;
    g.vertices_.push_back(vid);
    return idx;
  };

  for (int e = 0; e < int(g.edges_.size()); ++e) {
    const EdgeSpec& spec = g.edges_[e];
    if (spec.id.empty()) throw Error("graph: edge with empty id");
    if (g.edge_lookup_.count(spec.id))
      throw Error("graph: duplicate edge id '" + spec.id + "'");
    if (!(spec.length > 0.0))
      throw Error("graph: edge '" + spec.id + "' has nonpositive length");
    if (spec.block_size < 1)
      throw Error("graph: edge '" + spec.id + "' has nonpositive block size");
    g.edge_lookup_[spec.id] = e;
    g.tail_.push_back(intern_vertex(spec.tail));
    g.head_.push_back(intern_vertex(spec.head));
    g.edge_offset_.push_back(g.total_dim_);
    g.total_dim_ += spec.block_size;
  }

  // Vertex trace layout: edges in input order, a self-loop contributing its
  // tail block before its head block.
  g.slots_.assign(g.vertices_.size(), {});
  g.vertex_dim_.assign(g.vertices_.size(), 0);
  for (int e = 0; e < g.num_edges(); ++e) {
    const int ke = g.edges_[e].block_size;
    const int vt = g.tail_[e];
    g.slots_[vt].push_back({e, Endpoint::Tail, g.vertex_dim_[vt]});
    g.vertex_dim_[vt] += ke;
    const int vh = g.head_[e];
    g.slots_[vh].push_back({e, Endpoint::Head, g.vertex_dim_[vh]});
    g.vertex_dim_[vh] += ke;
  }
  return g;
}

int MetricGraph::edge_index(const std::string& id) const {
  auto it = edge_lookup_.find(id);
  if (it == edge_lookup_.end()) throw Error("graph: unknown edge id '" + id + "'");
  return it->second;
}

int MetricGraph::vertex_index(const std::string& id) const {
  auto it = vertex_lookup_.find(id);
  if (it == vertex_lookup_.end()) throw Error("graph: unknown vertex id '" + id + "'");
  return it->second;
}

int MetricGraph::incidence(int v, int e, Endpoint end) const {
  if (v < 0 || v >= num_vertices()) throw Error("graph: vertex index out of range");
  if (e < 0 || e >= num_edges()) throw Error("graph: edge index out of range");
  if (end == Endpoint::Tail && tail_[e] == v) return -1;
  if (end == Endpoint::Head && head_[e] == v) return +1;
  return 0;
}

int MetricGraph::incidence(int v, int e) const {
  return incidence(v, e, Endpoint::Tail) + incidence(v, e, Endpoint::Head);
}

}  // namespace netwave
