#include "gepd/filtration.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>

#include "gepd/error.hpp"

namespace gepd {

FilteredGraph build_filtration(Graph g, std::vector<double> vertex_values) {
  if (vertex_values.size() != g.num_vertices()) {
    throw DataError("filter has " + std::to_string(vertex_values.size()) + " values for " +
                    std::to_string(g.num_vertices()) + " vertices");
  }
  for (std::size_t v = 0; v < vertex_values.size(); ++v) {
    if (!std::isfinite(vertex_values[v])) {
      throw DataError("filter value of vertex " + std::to_string(v) + " is not finite");
    }
  }

  FilteredGraph fg;
  fg.graph = std::move(g);
  fg.vertex_values = std::move(vertex_values);
  const auto& f = fg.vertex_values;
  const std::size_t n = fg.graph.num_vertices();
  const std::size_t m = fg.graph.num_edges();

  fg.vertex_order.resize(n);
  std::iota(fg.vertex_order.begin(), fg.vertex_order.end(), VertexId{0});
  std::sort(fg.vertex_order.begin(), fg.vertex_order.end(),
            [&](VertexId a, VertexId b) { return f[a] != f[b] ? f[a] < f[b] : a < b; });
  fg.vertex_rank.resize(n);
  for (std::uint32_t r = 0; r < n; ++r) fg.vertex_rank[fg.vertex_order[r]] = r;

  fg.edge_values_asc.resize(m);
  fg.edge_values_desc.resize(m);
  for (EdgeId e = 0; e < m; ++e) {
    const Edge& ed = fg.graph.edge(e);
    fg.edge_values_asc[e] = std::max(f[ed.u], f[ed.v]);
    fg.edge_values_desc[e] = std::min(f[ed.u], f[ed.v]);
  }

  // Within the total vertex order, sorting by later-endpoint rank already
  // sorts by ascending edge value; the value key is kept for clarity.
  fg.edge_order_asc.resize(m);
  std::iota(fg.edge_order_asc.begin(), fg.edge_order_asc.end(), EdgeId{0});
  std::sort(fg.edge_order_asc.begin(), fg.edge_order_asc.end(), [&](EdgeId a, EdgeId b) {
    if (fg.edge_values_asc[a] != fg.edge_values_asc[b]) return fg.edge_values_asc[a] < fg.edge_values_asc[b];
    auto ra = fg.vertex_rank[fg.later_endpoint(a)];
    auto rb = fg.vertex_rank[fg.later_endpoint(b)];
    return ra != rb ? ra < rb : a < b;
  });

  fg.edge_order_desc.resize(m);
  std::iota(fg.edge_order_desc.begin(), fg.edge_order_desc.end(), EdgeId{0});
  std::sort(fg.edge_order_desc.begin(), fg.edge_order_desc.end(), [&](EdgeId a, EdgeId b) {
    if (fg.edge_values_desc[a] != fg.edge_values_desc[b]) return fg.edge_values_desc[a] > fg.edge_values_desc[b];
    auto ra = fg.vertex_rank[fg.earlier_endpoint(a)];
    auto rb = fg.vertex_rank[fg.earlier_endpoint(b)];
    return ra != rb ? ra > rb : a < b;
  });
  return fg;
}

std::vector<double> read_filter_values(std::istream& in, std::size_t num_vertices) {
  std::vector<double> values(num_vertices, 0.0);
  std::vector<bool> seen(num_vertices, false);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto pos = line.find_first_not_of(" \t\r");
    if (pos == std::string::npos || line[pos] == '#') continue;
    std::istringstream fields(line);
    long long v = 0;
    std::string value_text;
    std::string rest;
    if (!(fields >> v >> value_text) || (fields >> rest)) {
      throw DataError("filter values line " + std::to_string(line_no) + ": expected \"v value\"");
    }
    if (v < 0 || static_cast<std::size_t>(v) >= num_vertices) {
      throw DataError("filter values line " + std::to_string(line_no) + ": vertex " + std::to_string(v) +
                      " out of range");
    }
    std::size_t used = 0;
    double value = 0.0;
    try {
      value = std::stod(value_text, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != value_text.size() || !std::isfinite(value)) {
      throw DataError("filter values line " + std::to_string(line_no) + ": bad value \"" + value_text + "\"");
    }
    values[static_cast<std::size_t>(v)] = value;
    seen[static_cast<std::size_t>(v)] = true;
  }
  for (std::size_t v = 0; v < num_vertices; ++v) {
    if (!seen[v]) throw DataError("filter values: vertex " + std::to_string(v) + " has no value");
  }
  return values;
}

std::vector<double> read_filter_values(const std::filesystem::path& path, std::size_t num_vertices) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open filter values file " + path.string());
  try {
    return read_filter_values(in, num_vertices);
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

void write_filter_values(std::ostream& out, std::span<const double> values) {
  char buf[64];
  for (std::size_t v = 0; v < values.size(); ++v) {
    std::snprintf(buf, sizeof buf, "%.17g", values[v]);
    out << v << ' ' << buf << '\n';
  }
}

}  // namespace gepd
