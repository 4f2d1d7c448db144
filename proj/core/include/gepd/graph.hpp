#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace gepd {

using VertexId = std::uint32_t;
using EdgeId = std::uint32_t;

struct Edge {
  VertexId u;
  VertexId v;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Immutable undirected simple graph on vertices [0, num_vertices).
///
/// Edges are stored with u < v, sorted lexicographically, duplicate-free;
/// an edge's id is its index in that list. Adjacency is kept in CSR form,
/// each vertex's neighbors sorted by id and tagged with the edge id.
class Graph {
 public:
  struct Incidence {
    VertexId neighbor;
    EdgeId edge;
  };

  Graph() = default;

  /// Canonicalizes raw_edges: drops self-loops, merges duplicates, orders
  /// endpoints. Throws DataError naming the first edge with an id out of range.
  Graph(std::size_t num_vertices, std::span<const std::pair<VertexId, VertexId>> raw_edges);

  std::size_t num_vertices() const { return num_vertices_; }
  std::size_t num_edges() const { return edges_.size(); }
  std::span<const Edge> edges() const { return edges_; }
  const Edge& edge(EdgeId e) const { return edges_[e]; }

  std::span<const Incidence> incident(VertexId v) const {
    return {incidences_.data() + offsets_[v], incidences_.data() + offsets_[v + 1]};
  }
  std::size_t degree(VertexId v) const { return offsets_[v + 1] - offsets_[v]; }

  friend bool operator==(const Graph& a, const Graph& b) {
    return a.num_vertices_ == b.num_vertices_ && a.edges_ == b.edges_;
  }

 private:
  std::size_t num_vertices_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::size_t> offsets_{0};
  std::vector<Incidence> incidences_;
};

Graph build_graph(std::size_t num_vertices, std::span<const std::pair<VertexId, VertexId>> raw_edges);

struct Components {
  std::size_t count = 0;
  std::vector<std::uint32_t> label;  // per vertex, 0..count-1 in order of first vertex id
};

Components connected_components(const Graph& g);

/// A subgraph together with the original id of each local vertex.
struct Subgraph {
  Graph graph;
  std::vector<VertexId> original_ids;
};

/// Induced subgraph on every vertex within k hops of center. The center is
/// local vertex 0; remaining vertices follow in increasing original id.
Subgraph khop_vicinity(const Graph& g, VertexId center, std::size_t k);

/// Induced subgraph of the largest component; ties go to the component with
/// the smallest minimum vertex id. Local ids follow increasing original id.
Subgraph largest_connected_subgraph(const Graph& g);

Subgraph induced_subgraph(const Graph& g, std::span<const VertexId> vertices);

struct SbmConfig {
  std::size_t num_vertices = 0;
  std::size_t num_clusters = 1;
  double p_intra = 0.0;
  double p_inter = 0.0;
  std::uint64_t seed = 0;
};

/// Stochastic block model. Clusters are contiguous id blocks whose sizes
/// differ by at most one (the first n mod k blocks get the extra vertex).
/// Pairs (i, j), i < j, are visited in lexicographic order and each draws
/// one Rng::uniform() value.
Graph sbm_generate(const SbmConfig& cfg);

std::size_t sbm_cluster_of(const SbmConfig& cfg, VertexId v);

}  // namespace gepd
