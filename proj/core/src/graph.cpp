#include "gepd/graph.hpp"

#include <algorithm>
#include <deque>
#include <string>

#include "gepd/error.hpp"
#include "gepd/rng.hpp"

namespace gepd {

Graph::Graph(std::size_t num_vertices, std::span<const std::pair<VertexId, VertexId>> raw_edges)
    : num_vertices_(num_vertices) {
  edges_.reserve(raw_edges.size());
  for (const auto& [a, b] : raw_edges) {
    if (a >= num_vertices || b >= num_vertices) {
      throw DataError("edge (" + std::to_string(a) + ", " + std::to_string(b) +
                      ") has a vertex id outside [0, " + std::to_string(num_vertices) + ")");
    }
    if (a == b) continue;
    edges_.push_back(a < b ? Edge{a, b} : Edge{b, a});
  }
  std::sort(edges_.begin(), edges_.end());
  edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());

  offsets_.assign(num_vertices + 1, 0);
  for (const Edge& e : edges_) {
    ++offsets_[e.u + 1];
    ++offsets_[e.v + 1];
  }
  for (std::size_t i = 0; i < num_vertices; ++i) offsets_[i + 1] += offsets_[i];
  incidences_.resize(2 * edges_.size());
  std::vector<std::size_t> cursor(offsets_.begin(), offsets_.end() - 1);
  for (EdgeId id = 0; id < edges_.size(); ++id) {
    const Edge& e = edges_[id];
    incidences_[cursor[e.u]++] = {e.v, id};
    incidences_[cursor[e.v]++] = {e.u, id};
  }
  for (std::size_t v = 0; v < num_vertices; ++v) {
    std::sort(incidences_.begin() + static_cast<std::ptrdiff_t>(offsets_[v]),
              incidences_.begin() + static_cast<std::ptrdiff_t>(offsets_[v + 1]),
              [](const Incidence& x, const Incidence& y) { return x.neighbor < y.neighbor; });
  }
}

Graph build_graph(std::size_t num_vertices, std::span<const std::pair<VertexId, VertexId>> raw_edges) {
  return Graph(num_vertices, raw_edges);
}

Components connected_components(const Graph& g) {
  constexpr std::uint32_t kUnset = ~std::uint32_t{0};
  Components out;
  out.label.assign(g.num_vertices(), kUnset);
  std::vector<VertexId> stack;
  for (VertexId s = 0; s < g.num_vertices(); ++s) {
    if (out.label[s] != kUnset) continue;
    auto id = static_cast<std::uint32_t>(out.count++);
    out.label[s] = id;
    stack.push_back(s);
    while (!stack.empty()) {
      VertexId v = stack.back();
      stack.pop_back();
      for (const auto& inc : g.incident(v)) {
        if (out.label[inc.neighbor] == kUnset) {
          out.label[inc.neighbor] = id;
          stack.push_back(inc.neighbor);
        }
      }
    }
  }
  return out;
}

Subgraph induced_subgraph(const Graph& g, std::span<const VertexId> vertices) {
  constexpr VertexId kAbsent = ~VertexId{0};
  std::vector<VertexId> local(g.num_vertices(), kAbsent);
  for (std::size_t i = 0; i < vertices.size(); ++i) local[vertices[i]] = static_cast<VertexId>(i);
  std::vector<std::pair<VertexId, VertexId>> edges;
  for (const Edge& e : g.edges()) {
    if (local[e.u] != kAbsent && local[e.v] != kAbsent) edges.emplace_back(local[e.u], local[e.v]);
  }
  return {Graph(vertices.size(), edges), {vertices.begin(), vertices.end()}};
}

Subgraph khop_vicinity(const Graph& g, VertexId center, std::size_t k) {
  if (center >= g.num_vertices()) {
    throw DataError("vicinity center " + std::to_string(center) + " is not a vertex");
  }
  constexpr std::size_t kUnseen = ~std::size_t{0};
  std::vector<std::size_t> hops(g.num_vertices(), kUnseen);
  std::deque<VertexId> queue{center};
  hops[center] = 0;
  std::vector<VertexId> others;
  while (!queue.empty()) {
    VertexId v = queue.front();
    queue.pop_front();
    if (hops[v] == k) continue;
    for (const auto& inc : g.incident(v)) {
      if (hops[inc.neighbor] != kUnseen) continue;
      hops[inc.neighbor] = hops[v] + 1;
      others.push_back(inc.neighbor);
      queue.push_back(inc.neighbor);
    }
  }
  std::sort(others.begin(), others.end());
  std::vector<VertexId> order{center};
  order.insert(order.end(), others.begin(), others.end());
  return induced_subgraph(g, order);
}

Subgraph largest_connected_subgraph(const Graph& g) {
  if (g.num_vertices() == 0) return {};
  Components cc = connected_components(g);
  // Labels are assigned in order of first vertex id, so the first label
  // reaching the maximum size also has the smallest minimum id.
  std::vector<std::size_t> sizes(cc.count, 0);
  for (auto l : cc.label) ++sizes[l];
  auto best = static_cast<std::uint32_t>(std::max_element(sizes.begin(), sizes.end()) - sizes.begin());
  std::vector<VertexId> keep;
  for (VertexId v = 0; v < g.num_vertices(); ++v) {
    if (cc.label[v] == best) keep.push_back(v);
  }
  return induced_subgraph(g, keep);
}

std::size_t sbm_cluster_of(const SbmConfig& cfg, VertexId v) {
  std::size_t base = cfg.num_vertices / cfg.num_clusters;
  std::size_t extra = cfg.num_vertices % cfg.num_clusters;
  std::size_t big_span = extra * (base + 1);
  if (v < big_span) return v / (base + 1);
  return extra + (v - big_span) / base;
}

Graph sbm_generate(const SbmConfig& cfg) {
  if (cfg.num_clusters == 0) throw DataError("SBM needs at least one cluster");
  if (!(cfg.p_inter >= 0.0 && cfg.p_inter <= cfg.p_intra && cfg.p_intra <= 1.0)) {
    throw DataError("SBM probabilities must satisfy 0 <= p_inter <= p_intra <= 1");
  }
  Rng rng(cfg.seed);
  std::vector<std::size_t> cluster(cfg.num_vertices);
  for (VertexId v = 0; v < cfg.num_vertices; ++v) cluster[v] = sbm_cluster_of(cfg, v);
  std::vector<std::pair<VertexId, VertexId>> edges;
  for (VertexId i = 0; i < cfg.num_vertices; ++i) {
    for (VertexId j = i + 1; j < cfg.num_vertices; ++j) {
      double p = cluster[i] == cluster[j] ? cfg.p_intra : cfg.p_inter;
      if (rng.uniform() < p) edges.emplace_back(i, j);
    }
  }
  return Graph(cfg.num_vertices, edges);
}

}  // namespace gepd
