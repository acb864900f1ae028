#pragma once

#include <map>
#include <string>
#include <vector>

#include "netwave/types.hpp"

namespace netwave {

struct EdgeSpec {
  std::string id;
  std::string tail;  // initial endpoint, x = 0
  std::string head;  // terminal endpoint, x = length
  double length = 1.0;
  int block_size = 1;
};

enum class Endpoint { Tail, Head };

/// One entry of a vertex trace vector: the value of edge `edge` at the given
/// endpoint. A self-loop contributes two slots at its vertex, tail first.
struct TraceSlot {
  int edge;
  Endpoint end;
  int offset;  // offset of this block inside the vertex trace vector
};

/// Finite directed metric graph. Immutable after construction; edge order is
/// the input order and fixes every vector layout downstream.
class MetricGraph {
public:
  /// Validates and builds. Vertices are ordered by first appearance in the
  /// edge list (tail before head). Pass `declared_vertices` to fix the vertex
  /// order explicitly; edges referencing undeclared vertices are then errors.
  static MetricGraph build(std::vector<EdgeSpec> edges,
                           std::vector<std::string> declared_vertices = {});

  int num_edges() const { return int(edges_.size()); }
  int num_vertices() const { return int(vertices_.size()); }
  const EdgeSpec& edge(int e) const { return edges_.at(e); }
  const std::string& vertex_id(int v) const { return vertices_.at(v); }
  const std::vector<std::string>& vertex_ids() const { return vertices_; }
  const std::vector<EdgeSpec>& edges() const { return edges_; }

  int edge_index(const std::string& id) const;
  int vertex_index(const std::string& id) const;

  int tail_of(int e) const { return tail_.at(e); }
  int head_of(int e) const { return head_.at(e); }

  /// Total system dimension k = sum of block sizes.
  int total_dim() const { return total_dim_; }
  /// Offset of edge e's block in the global C^k layout.
  int edge_offset(int e) const { return edge_offset_.at(e); }

  /// Trace dimension k_v at vertex v (self-loop edges counted twice).
  int vertex_dim(int v) const { return int(vertex_dim_.at(v)); }
  const std::vector<TraceSlot>& vertex_slots(int v) const { return slots_.at(v); }

  /// Incidence value for one endpoint role: -1 when `end` is Tail and v is
  /// the tail of e, +1 when `end` is Head and v is the head of e, else 0.
  int incidence(int v, int e, Endpoint end) const;
  /// Summed incidence value: -1 / +1 / 0, and 0 at a self-loop (both roles
  /// present; query them with the per-endpoint overload).
  int incidence(int v, int e) const;

private:
  std::vector<EdgeSpec> edges_;
  std::vector<std::string> vertices_;
  std::map<std::string, int> vertex_lookup_;
  std::map<std::string, int> edge_lookup_;
  std::vector<int> tail_, head_;
  std::vector<int> edge_offset_;
  std::vector<int> vertex_dim_;
  std::vector<std::vector<TraceSlot>> slots_;
  int total_dim_ = 0;
};

}  // namespace netwave
