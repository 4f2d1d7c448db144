#include <algorithm>
#include <cstdint>
#include <iterator>
#include <limits>

#include "gepd/error.hpp"
#include "gepd/persistence.hpp"

namespace gepd {
namespace {

enum class Cell : std::uint8_t { vertex, edge, cone_apex, cone_vertex, cone_edge };

struct Column {
  Cell cell;
  std::uint32_t simplex;                 // vertex or edge id; unused for the apex
  std::vector<std::uint32_t> boundary;   // sorted row indices
};

using Chain = std::vector<std::uint32_t>;

void add_into(Chain& target, const Chain& source, Chain& scratch) {
  scratch.clear();
  std::set_symmetric_difference(target.begin(), target.end(), source.begin(), source.end(),
                                std::back_inserter(scratch));
  target.swap(scratch);
}

}  // namespace

PersistenceDiagram epd_matrix_reduction(const FilteredGraph& fg, ReductionStats* stats) {
  const Graph& g = fg.graph;
  const std::size_t n = g.num_vertices();
  const std::size_t m = g.num_edges();
  constexpr std::uint32_t kNone = std::numeric_limits<std::uint32_t>::max();

  std::vector<std::uint32_t> vertex_index(n), edge_index(m), cone_vertex_index(n);
  std::vector<Column> columns;
  columns.reserve(2 * (n + m) + 1);

  // Ascending part: each vertex followed by the edges it completes.
  std::size_t next_edge = 0;
  for (VertexId v : fg.vertex_order) {
    vertex_index[v] = static_cast<std::uint32_t>(columns.size());
    columns.push_back({Cell::vertex, v, {}});
    while (next_edge < m && fg.later_endpoint(fg.edge_order_asc[next_edge]) == v) {
      EdgeId e = fg.edge_order_asc[next_edge++];
      const Edge& ed = g.edge(e);
      edge_index[e] = static_cast<std::uint32_t>(columns.size());
      Chain b{vertex_index[ed.u], vertex_index[ed.v]};
      std::sort(b.begin(), b.end());
      columns.push_back({Cell::edge, e, std::move(b)});
    }
  }
  if (next_edge != m) throw InvariantViolation("ascending edge order is inconsistent with the vertex order");

  // Descending part: the apex, then per vertex (top down) its cone edge
  // followed by the cone triangles over its upper edges.
  const auto apex = static_cast<std::uint32_t>(columns.size());
  columns.push_back({Cell::cone_apex, 0, {}});
  next_edge = 0;
  for (auto it = fg.vertex_order.rbegin(); it != fg.vertex_order.rend(); ++it) {
    VertexId v = *it;
    cone_vertex_index[v] = static_cast<std::uint32_t>(columns.size());
    columns.push_back({Cell::cone_vertex, v, {apex, vertex_index[v]}});
    std::sort(columns.back().boundary.begin(), columns.back().boundary.end());
    while (next_edge < m && fg.earlier_endpoint(fg.edge_order_desc[next_edge]) == v) {
      EdgeId e = fg.edge_order_desc[next_edge++];
      const Edge& ed = g.edge(e);
      Chain b{edge_index[e], cone_vertex_index[ed.u], cone_vertex_index[ed.v]};
      std::sort(b.begin(), b.end());
      columns.push_back({Cell::cone_edge, e, std::move(b)});
    }
  }
  if (next_edge != m) throw InvariantViolation("descending edge order is inconsistent with the vertex order");

  std::vector<std::uint32_t> pivot_owner(columns.size(), kNone);
  Chain scratch;
  PersistenceDiagram d;
  std::uint64_t additions = 0;
  for (std::uint32_t j = 0; j < columns.size(); ++j) {
    Chain& col = columns[j].boundary;
    while (!col.empty()) {
      std::uint32_t low = col.back();
      std::uint32_t k = pivot_owner[low];
      if (k == kNone) break;
      add_into(col, columns[k].boundary, scratch);
      ++additions;
    }
    if (col.empty()) continue;
    const std::uint32_t low = col.back();
    pivot_owner[low] = j;
    const Column& row = columns[low];
    const Column& killer = columns[j];
    if (row.cell == Cell::vertex && killer.cell == Cell::edge) {
      d.dim0.push_back({fg.vertex_values[row.simplex], fg.edge_values_asc[killer.simplex], 0, row.simplex,
                        killer.simplex});
    } else if (row.cell == Cell::edge && killer.cell == Cell::cone_edge) {
      d.dim1.push_back({fg.edge_values_asc[row.simplex], fg.edge_values_desc[killer.simplex], 1, row.simplex,
                        killer.simplex});
    }
  }
  if (stats) {
    stats->columns += columns.size();
    stats->column_additions += additions;
  }
  d.sort();
  return d;
}

}  // namespace gepd
