#include "gepd/graph_io.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "gepd/error.hpp"

namespace gepd {
namespace {

bool is_skippable(const std::string& line) {
  auto pos = line.find_first_not_of(" \t\r");
  return pos == std::string::npos || line[pos] == '#';
}

[[noreturn]] void fail(std::size_t line_no, const std::string& what) {
  throw DataError("edge list line " + std::to_string(line_no) + ": " + what);
}

}  // namespace

Graph read_edge_list(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  std::size_t num_vertices = 0;
  std::size_t num_edges = 0;
  std::vector<std::pair<VertexId, VertexId>> edges;
  while (std::getline(in, line)) {
    ++line_no;
    if (is_skippable(line)) continue;
    std::istringstream fields(line);
    long long a = 0;
    long long b = 0;
    std::string rest;
    if (!(fields >> a >> b) || (fields >> rest)) fail(line_no, "expected two integers, got \"" + line + "\"");
    if (a < 0 || b < 0) fail(line_no, "negative value");
    if (!have_header) {
      num_vertices = static_cast<std::size_t>(a);
      num_edges = static_cast<std::size_t>(b);
      have_header = true;
      edges.reserve(num_edges);
      continue;
    }
    if (static_cast<std::size_t>(a) >= num_vertices || static_cast<std::size_t>(b) >= num_vertices) {
      fail(line_no, "edge (" + std::to_string(a) + ", " + std::to_string(b) + ") references a vertex outside [0, " +
                        std::to_string(num_vertices) + ")");
    }
    edges.emplace_back(static_cast<VertexId>(a), static_cast<VertexId>(b));
  }
  if (!have_header) fail(line_no, "missing \"V E\" header");
  if (edges.size() != num_edges) {
    fail(line_no, "header declares " + std::to_string(num_edges) + " edges but " + std::to_string(edges.size()) +
                      " were read");
  }
  return Graph(num_vertices, edges);
}

Graph read_edge_list(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open graph file " + path.string());
  try {
    return read_edge_list(in);
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

void write_edge_list(std::ostream& out, const Graph& g, const std::vector<std::string>& comments) {
  for (const auto& c : comments) out << "# " << c << '\n';
  out << g.num_vertices() << ' ' << g.num_edges() << '\n';
  for (const Edge& e : g.edges()) out << e.u << ' ' << e.v << '\n';
}

void write_edge_list(const std::filesystem::path& path, const Graph& g, const std::vector<std::string>& comments) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write graph file " + path.string());
  write_edge_list(out, g, comments);
}

}  // namespace gepd
