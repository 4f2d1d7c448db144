#include "gepd/persistence.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "gepd/error.hpp"
#include "parallel.hpp"

namespace gepd {

bool diagram_order(const PersistencePair& a, const PersistencePair& b) {
  if (a.birth != b.birth) return a.birth < b.birth;
  if (a.death != b.death) return a.death < b.death;
  return a.creator < b.creator;
}

void PersistenceDiagram::sort() {
  std::sort(dim0.begin(), dim0.end(), diagram_order);
  std::sort(dim1.begin(), dim1.end(), diagram_order);
}

PersistenceDiagram PersistenceDiagram::without_zero_persistence(double epsilon) const {
  PersistenceDiagram out;
  out.include_zero_persistence = false;
  for (const auto& p : dim0) {
    if (p.persistence() > epsilon) out.dim0.push_back(p);
  }
  for (const auto& p : dim1) {
    if (p.persistence() > epsilon) out.dim1.push_back(p);
  }
  return out;
}

std::size_t EdgePairingMap::positive_count() const {
  return static_cast<std::size_t>(std::count_if(entries.begin(), entries.end(), [](const Entry& e) {
    return e.role == EdgeRole::positive_ascending;
  }));
}

UnionFind::UnionFind(std::vector<std::uint64_t> keys, UnionFindStats* stats)
    : parent_(keys.size()), keys_(std::move(keys)), stats_(stats) {
  std::iota(parent_.begin(), parent_.end(), std::uint32_t{0});
}

std::uint32_t UnionFind::find(std::uint32_t x) {
  if (stats_) ++stats_->finds;
  while (parent_[x] != x) {
    parent_[x] = parent_[parent_[x]];
    x = parent_[x];
  }
  return x;
}

std::uint32_t UnionFind::link(std::uint32_t a, std::uint32_t b) {
  if (stats_) ++stats_->unions;
  std::uint32_t survivor = keys_[a] < keys_[b] ? a : b;
  std::uint32_t absorbed = survivor == a ? b : a;
  parent_[absorbed] = survivor;
  return absorbed;
}

std::vector<PersistencePair> pd0_union_find(const FilteredGraph& fg, UnionFindStats* stats) {
  const Graph& g = fg.graph;
  std::vector<std::uint64_t> keys(fg.vertex_rank.begin(), fg.vertex_rank.end());
  UnionFind uf(std::move(keys), stats);
  std::vector<PersistencePair> out;
  out.reserve(g.num_vertices());
  for (EdgeId e : fg.edge_order_asc) {
    if (stats) ++stats->relaxations;
    const Edge& ed = g.edge(e);
    std::uint32_t ru = uf.find(ed.u);
    std::uint32_t rv = uf.find(ed.v);
    if (ru == rv) continue;
    std::uint32_t younger = uf.link(ru, rv);
    out.push_back({fg.vertex_values[younger], fg.edge_values_asc[e], 0, younger, e});
  }
  return out;
}

std::vector<PersistencePair> union_find_step(const FilteredGraph& fg, VertexId center, UnionFindStats* stats) {
  const Graph& g = fg.graph;
  const std::size_t n = g.num_vertices();
  const std::uint32_t center_rank = fg.vertex_rank[center];

  // Clone c stands for the c-th upper edge of the center, in edge id order.
  // Elements: vertices keep their ids, clone c is element n + c. Clones get
  // keys 0..k-1 and vertex v gets k + rank(v), so every clone precedes every
  // swept vertex and clones are ordered among themselves.
  std::vector<EdgeId> clone_edge;
  for (const auto& inc : g.incident(center)) {
    if (fg.vertex_rank[inc.neighbor] > center_rank) clone_edge.push_back(inc.edge);
  }
  std::vector<PersistencePair> out;
  if (clone_edge.size() < 2) return out;

  const std::uint64_t k = clone_edge.size();
  std::vector<std::uint64_t> keys(n + k);
  for (VertexId v = 0; v < n; ++v) keys[v] = k + fg.vertex_rank[v];
  for (std::uint64_t c = 0; c < k; ++c) keys[n + c] = c;
  UnionFind uf(std::move(keys), stats);

  const double death = fg.vertex_values[center];
  for (std::uint32_t r = center_rank + 1; r < n; ++r) {
    const VertexId u = fg.vertex_order[r];
    for (const auto& inc : g.incident(u)) {
      const std::uint32_t wr = fg.vertex_rank[inc.neighbor];
      if (wr >= r || wr < center_rank) continue;
      if (stats) ++stats->relaxations;
      std::uint32_t other = inc.neighbor;
      if (inc.neighbor == center) {
        auto it = std::find(clone_edge.begin(), clone_edge.end(), inc.edge);
        other = static_cast<std::uint32_t>(n + static_cast<std::size_t>(it - clone_edge.begin()));
      }
      std::uint32_t ru = uf.find(u);
      std::uint32_t rw = uf.find(other);
      if (ru == rw) continue;
      const bool both_clones = uf.key(ru) < k && uf.key(rw) < k;
      std::uint32_t absorbed = uf.link(ru, rw);
      if (both_clones) {
        out.push_back({fg.edge_values_asc[inc.edge], death, 1, inc.edge, clone_edge[absorbed - n]});
      }
    }
  }
  return out;
}

std::vector<PersistencePair> epd1_decomposed(const FilteredGraph& fg, unsigned threads, UnionFindStats* stats) {
  const std::size_t n = fg.graph.num_vertices();
  std::vector<std::vector<PersistencePair>> per_center(n);
  std::vector<UnionFindStats> local(detail::worker_count(n, threads));
  detail::parallel_for(n, threads, [&](std::size_t r, unsigned w) {
    per_center[r] = union_find_step(fg, fg.vertex_order[r], stats ? &local[w] : nullptr);
  });
  if (stats) {
    for (const auto& s : local) *stats += s;
  }
  std::vector<PersistencePair> out;
  for (auto& part : per_center) out.insert(out.end(), part.begin(), part.end());
  return out;
}

PersistenceDiagram epd_union_find(const FilteredGraph& fg, unsigned threads, UnionFindStats* stats) {
  PersistenceDiagram d;
  d.dim0 = pd0_union_find(fg, stats);
  d.dim1 = epd1_decomposed(fg, threads, stats);
  d.sort();
  return d;
}

EdgePairingMap edge_pairings(const FilteredGraph& fg, const PersistenceDiagram& diagram) {
  const std::size_t m = fg.graph.num_edges();
  EdgePairingMap map;
  map.entries.resize(m);
  std::vector<char> claimed(m, 0);
  auto claim = [&](EdgeId e, EdgeRole role, const PersistencePair& p) {
    if (e >= m) throw InvariantViolation("pair references edge " + std::to_string(e) + " outside the graph");
    if (claimed[e]) throw InvariantViolation("edge " + std::to_string(e) + " is paired twice");
    claimed[e] = 1;
    map.entries[e] = {role, p};
  };
  for (const auto& p : diagram.dim0) claim(p.destroyer, EdgeRole::negative_ascending, p);
  for (const auto& p : diagram.dim1) claim(p.creator, EdgeRole::positive_ascending, p);
  for (EdgeId e = 0; e < m; ++e) {
    if (!claimed[e]) throw InvariantViolation("edge " + std::to_string(e) + " has no pair");
  }
  return map;
}

EdgePairingMap edge_pairings(const FilteredGraph& fg) {
  return edge_pairings(fg, epd_union_find(fg));
}

}  // namespace gepd
