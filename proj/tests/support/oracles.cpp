#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "gepd/rng.hpp"

namespace gepd::oracle {

std::vector<std::vector<int>> all_pairs_hops(const Graph& g) {
  const std::size_t n = g.num_vertices();
  std::vector<std::vector<int>> d(n, std::vector<int>(n, kUnreachable));
  for (std::size_t v = 0; v < n; ++v) d[v][v] = 0;
  for (const auto& e : g.edges()) d[e.u][e.v] = d[e.v][e.u] = 1;
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);
    }
  }
  return d;
}

std::size_t component_count(const Graph& g) {
  const auto d = all_pairs_hops(g);
  std::size_t count = 0;
  for (std::size_t v = 0; v < g.num_vertices(); ++v) {
    bool first = true;
    for (std::size_t u = 0; u < v; ++u) {
      if (d[u][v] < kUnreachable) first = false;
    }
    count += first;
  }
  return count;
}

std::vector<std::size_t> triangles_per_vertex(const Graph& g) {
  const std::size_t n = g.num_vertices();
  std::vector<std::vector<bool>> adj(n, std::vector<bool>(n, false));
  for (const auto& e : g.edges()) adj[e.u][e.v] = adj[e.v][e.u] = true;
  std::vector<std::size_t> out(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      for (std::size_t k = j + 1; k < n; ++k) {
        if (adj[i][j] && adj[j][k] && adj[i][k]) {
          ++out[i];
          ++out[j];
          ++out[k];
        }
      }
    }
  }
  return out;
}

double w1_dual_enumeration(const Graph& g, std::span<const double> mu, std::span<const double> nu) {
  const auto d = all_pairs_hops(g);
  std::vector<std::size_t> support;
  for (std::size_t v = 0; v < g.num_vertices(); ++v) {
    if (mu[v] != 0.0 || nu[v] != 0.0) support.push_back(v);
  }
  if (support.size() <= 1) return 0.0;
  int span = 0;
  for (auto a : support) {
    for (auto b : support) {
      if (d[a][b] >= kUnreachable) throw std::invalid_argument("support is disconnected");
      span = std::max(span, d[a][b]);
    }
  }
  const std::size_t k = support.size();
  std::vector<int> phi(k, 0);
  double best = -std::numeric_limits<double>::infinity();
  // phi[0] = 0; the rest range over [-span, span].
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == k) {
      double value = 0.0;
      for (std::size_t j = 0; j < k; ++j) value += phi[j] * (mu[support[j]] - nu[support[j]]);
      best = std::max(best, value);
      return;
    }
    for (int x = -span; x <= span; ++x) {
      bool ok = true;
      for (std::size_t j = 0; j < i && ok; ++j) ok = std::abs(x - phi[j]) <= d[support[i]][support[j]];
      if (!ok) continue;
      phi[i] = x;
      rec(i + 1);
    }
  };
  rec(1);
  return best;
}

namespace {

double sq(double x) { return x * x; }

}  // namespace

double w2_brute_force(std::span<const DiagramPoint> a, std::span<const DiagramPoint> b) {
  std::vector<bool> used(b.size(), false);
  double best = std::numeric_limits<double>::infinity();
  std::function<void(std::size_t, double)> rec = [&](std::size_t i, double acc) {
    if (acc >= best) return;
    if (i == a.size()) {
      double rest = acc;
      for (std::size_t j = 0; j < b.size(); ++j) {
        if (!used[j]) rest += sq(b[j].death - b[j].birth) / 2.0;
      }
      best = std::min(best, rest);
      return;
    }
    rec(i + 1, acc + sq(a[i].death - a[i].birth) / 2.0);
    for (std::size_t j = 0; j < b.size(); ++j) {
      if (used[j]) continue;
      used[j] = true;
      rec(i + 1, acc + sq(a[i].birth - b[j].birth) + sq(a[i].death - b[j].death));
      used[j] = false;
    }
  };
  rec(0, 0.0);
  return std::sqrt(best);
}

double forced_brute_force(std::span<const DiagramPoint> pred, std::span<const DiagramPoint> target) {
  if (pred.size() != target.size()) throw std::invalid_argument("size mismatch");
  std::vector<std::size_t> perm(pred.size());
  std::iota(perm.begin(), perm.end(), 0);
  double best = std::numeric_limits<double>::infinity();
  do {
    double total = 0.0;
    for (std::size_t i = 0; i < perm.size(); ++i) {
      total += sq(pred[i].birth - target[perm[i]].birth) + sq(pred[i].death - target[perm[i]].death);
    }
    best = std::min(best, total);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return pred.empty() ? 0.0 : best;
}

double gaussian_cell_numeric(double cx, double cy, double sigma, double x0, double x1, double y0, double y1,
                             int steps) {
  // Composite Simpson in both directions; steps is rounded up to even.
  steps += steps % 2;
  const double hx = (x1 - x0) / steps;
  const double hy = (y1 - y0) / steps;
  auto weight = [steps](int i) { return i == 0 || i == steps ? 1.0 : (i % 2 ? 4.0 : 2.0); };
  const double norm = 1.0 / (2.0 * M_PI * sigma * sigma);
  double total = 0.0;
  for (int i = 0; i <= steps; ++i) {
    const double x = x0 + i * hx;
    for (int j = 0; j <= steps; ++j) {
      const double y = y0 + j * hy;
      total += weight(i) * weight(j) * norm * std::exp(-(sq(x - cx) + sq(y - cy)) / (2.0 * sigma * sigma));
    }
  }
  return total * hx * hy / 9.0;
}

std::vector<std::vector<EdgeId>> simple_cycles(const Graph& g) {
  const std::size_t m = g.num_edges();
  if (m > 16) throw std::invalid_argument("too many edges for subset enumeration");
  std::vector<std::vector<EdgeId>> out;
  for (std::uint32_t mask = 1; mask < (1u << m); ++mask) {
    std::vector<EdgeId> edges;
    std::vector<int> deg(g.num_vertices(), 0);
    for (EdgeId e = 0; e < m; ++e) {
      if (mask >> e & 1u) {
        edges.push_back(e);
        ++deg[g.edge(e).u];
        ++deg[g.edge(e).v];
      }
    }
    if (edges.size() < 3) continue;
    bool all_two = true;
    for (int d : deg) all_two = all_two && (d == 0 || d == 2);
    if (!all_two) continue;
    // Connected: walk the cycle from the first edge.
    std::vector<bool> seen(m, false);
    VertexId start = g.edge(edges[0]).u;
    VertexId cur = start;
    EdgeId via = edges[0];
    std::size_t steps = 0;
    do {
      seen[via] = true;
      ++steps;
      const Edge& ed = g.edge(via);
      cur = ed.u == cur ? ed.v : ed.u;
      EdgeId next = via;
      for (EdgeId e : edges) {
        if (!seen[e] && (g.edge(e).u == cur || g.edge(e).v == cur)) {
          next = e;
          break;
        }
      }
      if (next == via) break;
      via = next;
    } while (true);
    if (cur == start && steps == edges.size()) out.push_back(edges);
  }
  return out;
}

Graph erdos_renyi(std::size_t n, double p, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<std::pair<VertexId, VertexId>> edges;
  for (VertexId i = 0; i < n; ++i) {
    for (VertexId j = i + 1; j < n; ++j) {
      if (rng.uniform() < p) edges.emplace_back(i, j);
    }
  }
  return Graph(n, edges);
}

std::vector<double> injective_values(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> values(n);
  std::iota(values.begin(), values.end(), 1.0);
  rng.shuffle(values);
  const double shift = rng.uniform();
  for (double& v : values) v = v * 0.5 + shift;
  return values;
}

TempDir::TempDir(const std::string& tag) {
  static std::uint64_t counter = 0;
  Rng rng(static_cast<std::uint64_t>(std::hash<std::string>{}(tag)) ^ ++counter ^
          static_cast<std::uint64_t>(reinterpret_cast<std::uintptr_t>(this)));
  for (;;) {
    path_ = std::filesystem::temp_directory_path() / ("gepd-" + tag + "-" + std::to_string(rng.next_u64() % 1000000000));
    if (std::filesystem::create_directory(path_)) break;
  }
}

TempDir::~TempDir() {
  std::error_code ec;
  std::filesystem::remove_all(path_, ec);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
}

}  // namespace gepd::oracle
