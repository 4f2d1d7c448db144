#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "gepd/graph.hpp"

namespace gepd {

/// A graph with a vertex filter and the induced edge values and orders.
///
/// All orders are strict total orders, so every engine sees the same
/// filtration even when values tie:
///   vertex_order    by (value, vertex id) ascending
///   edge_order_asc  by (max endpoint value, rank of later endpoint, edge id)
///   edge_order_desc by (min endpoint value descending, rank of earlier
///                       endpoint descending, edge id)
/// "Earlier"/"later" endpoint refer to positions in vertex_order.
struct FilteredGraph {
  Graph graph;
  std::vector<double> vertex_values;
  std::vector<VertexId> vertex_order;
  std::vector<std::uint32_t> vertex_rank;  // inverse of vertex_order
  std::vector<double> edge_values_asc;
  std::vector<double> edge_values_desc;
  std::vector<EdgeId> edge_order_asc;
  std::vector<EdgeId> edge_order_desc;

  /// Endpoint of edge e that comes later in vertex_order.
  VertexId later_endpoint(EdgeId e) const {
    const Edge& ed = graph.edge(e);
    return vertex_rank[ed.u] > vertex_rank[ed.v] ? ed.u : ed.v;
  }
  VertexId earlier_endpoint(EdgeId e) const {
    const Edge& ed = graph.edge(e);
    return vertex_rank[ed.u] > vertex_rank[ed.v] ? ed.v : ed.u;
  }
};

/// Throws DataError on a size mismatch or a non-finite value.
FilteredGraph build_filtration(Graph g, std::vector<double> vertex_values);

// Filter functions. Each returns one value per vertex.

std::vector<double> degree_filter(const Graph& g);

/// Heat kernel signature sum_k exp(-lambda_k t) phi_k(v)^2 of the
/// unnormalized Laplacian D - A.
std::vector<double> hks_filter(const Graph& g, double t);

/// Local clustering coefficient; 0 for degree < 2.
std::vector<double> clustering_filter(const Graph& g);

/// Degree centrality deg(v) / (|V| - 1); 0 on a single-vertex graph.
std::vector<double> centrality_filter(const Graph& g);

/// Ollivier-Ricci curvature per edge (indexed by edge id):
/// kappa(u, v) = 1 - W1(m_u, m_v) with the lazy random-walk measures
/// m_x = alpha at x and (1 - alpha) / deg(x) on each neighbor, and hop
/// distance as ground metric.
std::vector<double> ricci_curvature(const Graph& g, double alpha = 0.5);

/// Weighted distance to the nearest center with edge length
/// 1 + max(0, -kappa). Throws DataError naming a vertex no center reaches.
std::vector<double> ricci_distance_filter(const Graph& g, std::span<const VertexId> centers, double alpha = 0.5);

/// Parsed filter selection: degree | hks:<t> | ricci-dist:<alpha> |
/// clustering | centrality.
struct FilterSpec {
  enum class Kind { degree, hks, ricci_distance, clustering, centrality };
  Kind kind = Kind::degree;
  double parameter = 0.0;

  static FilterSpec parse(const std::string& text);
  std::string to_string() const;
};

/// Evaluates a filter. Ricci-distance uses local vertex 0 as the single
/// center, matching vicinity graphs whose center is local id 0.
std::vector<double> evaluate_filter(const Graph& g, const FilterSpec& spec);

/// Filter-values file: one "v value" line per vertex, '#' comments allowed.
std::vector<double> read_filter_values(std::istream& in, std::size_t num_vertices);
std::vector<double> read_filter_values(const std::filesystem::path& path, std::size_t num_vertices);
void write_filter_values(std::ostream& out, std::span<const double> values);

}  // namespace gepd
