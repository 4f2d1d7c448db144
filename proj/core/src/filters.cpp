#include <Eigen/Dense>
#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <queue>

#include "gepd/error.hpp"
#include "gepd/filtration.hpp"
#include "gepd/transport.hpp"

namespace gepd {

std::vector<double> degree_filter(const Graph& g) {
  std::vector<double> out(g.num_vertices());
  for (VertexId v = 0; v < g.num_vertices(); ++v) out[v] = static_cast<double>(g.degree(v));
  return out;
}

std::vector<double> centrality_filter(const Graph& g) {
  std::vector<double> out(g.num_vertices(), 0.0);
  if (g.num_vertices() < 2) return out;
  const double denom = static_cast<double>(g.num_vertices() - 1);
  for (VertexId v = 0; v < g.num_vertices(); ++v) out[v] = static_cast<double>(g.degree(v)) / denom;
  return out;
}

std::vector<double> clustering_filter(const Graph& g) {
  std::vector<double> out(g.num_vertices(), 0.0);
  std::vector<char> mark(g.num_vertices(), 0);
  for (VertexId v = 0; v < g.num_vertices(); ++v) {
    const std::size_t d = g.degree(v);
    if (d < 2) continue;
    for (const auto& inc : g.incident(v)) mark[inc.neighbor] = 1;
    std::size_t twice = 0;
    for (const auto& inc : g.incident(v)) {
      for (const auto& inc2 : g.incident(inc.neighbor)) twice += mark[inc2.neighbor];
    }
    for (const auto& inc : g.incident(v)) mark[inc.neighbor] = 0;
    out[v] = static_cast<double>(twice / 2) / (static_cast<double>(d) * static_cast<double>(d - 1) / 2.0);
  }
  return out;
}

std::vector<double> hks_filter(const Graph& g, double t) {
  if (!(t > 0.0) || !std::isfinite(t)) throw DataError("HKS temperature must be positive and finite");
  const auto n = static_cast<Eigen::Index>(g.num_vertices());
  std::vector<double> out(g.num_vertices(), 0.0);
  if (n == 0) return out;
  Eigen::MatrixXd lap = Eigen::MatrixXd::Zero(n, n);
  for (const Edge& e : g.edges()) {
    lap(e.u, e.v) -= 1.0;
    lap(e.v, e.u) -= 1.0;
    lap(e.u, e.u) += 1.0;
    lap(e.v, e.v) += 1.0;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(lap);
  if (solver.info() != Eigen::Success) throw InvariantViolation("Laplacian eigensolve failed");
  const Eigen::VectorXd& lambda = solver.eigenvalues();
  const Eigen::MatrixXd& phi = solver.eigenvectors();
  for (Eigen::Index v = 0; v < n; ++v) {
    double acc = 0.0;
    for (Eigen::Index k = 0; k < n; ++k) acc += std::exp(-lambda(k) * t) * phi(v, k) * phi(v, k);
    out[static_cast<std::size_t>(v)] = acc;
  }
  return out;
}

namespace {

struct Measure {
  std::vector<VertexId> support;
  std::vector<double> mass;
};

Measure lazy_walk(const Graph& g, VertexId x, double alpha) {
  Measure m;
  const double spread = (1.0 - alpha) / static_cast<double>(g.degree(x));
  if (alpha > 0.0) {
    m.support.push_back(x);
    m.mass.push_back(alpha);
  }
  if (spread > 0.0) {
    for (const auto& inc : g.incident(x)) {
      m.support.push_back(inc.neighbor);
      m.mass.push_back(spread);
    }
  }
  return m;
}

// Hop distances from one source, explored up to max_depth; reuses scratch.
class BoundedBfs {
 public:
  explicit BoundedBfs(std::size_t n) : dist_(n, kUnseen) {}

  void run(const Graph& g, VertexId source, std::uint32_t max_depth) {
    for (VertexId v : touched_) dist_[v] = kUnseen;
    touched_.clear();
    std::queue<VertexId> q;
    dist_[source] = 0;
    touched_.push_back(source);
    q.push(source);
    while (!q.empty()) {
      VertexId v = q.front();
      q.pop();
      if (dist_[v] == max_depth) continue;
      for (const auto& inc : g.incident(v)) {
        if (dist_[inc.neighbor] != kUnseen) continue;
        dist_[inc.neighbor] = dist_[v] + 1;
        touched_.push_back(inc.neighbor);
        q.push(inc.neighbor);
      }
    }
  }
  bool reached(VertexId v) const { return dist_[v] != kUnseen; }
  std::uint32_t distance(VertexId v) const { return dist_[v]; }

 private:
  static constexpr std::uint32_t kUnseen = std::numeric_limits<std::uint32_t>::max();
  std::vector<std::uint32_t> dist_;
  std::vector<VertexId> touched_;
};

}  // namespace

std::vector<double> ricci_curvature(const Graph& g, double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw DataError("Ricci laziness alpha must lie in [0, 1]");
  std::vector<double> kappa(g.num_edges(), 0.0);
  BoundedBfs bfs(g.num_vertices());
  std::vector<double> cost;
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    const Edge& ed = g.edge(e);
    Measure mu = lazy_walk(g, ed.u, alpha);
    Measure mv = lazy_walk(g, ed.v, alpha);
    cost.assign(mu.support.size() * mv.support.size(), 0.0);
    for (std::size_t i = 0; i < mu.support.size(); ++i) {
      // Supports of adjacent vertices are at most 3 hops apart.
      bfs.run(g, mu.support[i], 3);
      for (std::size_t j = 0; j < mv.support.size(); ++j) {
        if (!bfs.reached(mv.support[j])) throw InvariantViolation("Ricci supports are disconnected");
        cost[i * mv.support.size() + j] = static_cast<double>(bfs.distance(mv.support[j]));
      }
    }
    kappa[e] = 1.0 - solve_transport(mu.mass, mv.mass, cost).cost;
  }
  return kappa;
}

std::vector<double> ricci_distance_filter(const Graph& g, std::span<const VertexId> centers, double alpha) {
  if (centers.empty()) throw DataError("Ricci distance filter needs at least one center");
  for (VertexId c : centers) {
    if (c >= g.num_vertices()) throw DataError("center " + std::to_string(c) + " is not a vertex");
  }
  std::vector<double> kappa = ricci_curvature(g, alpha);
  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> dist(g.num_vertices(), kInf);
  using Item = std::pair<double, VertexId>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  for (VertexId c : centers) {
    dist[c] = 0.0;
    heap.emplace(0.0, c);
  }
  while (!heap.empty()) {
    auto [d, v] = heap.top();
    heap.pop();
    if (d > dist[v]) continue;
    for (const auto& inc : g.incident(v)) {
      double len = 1.0 + std::max(0.0, -kappa[inc.edge]);
      if (d + len < dist[inc.neighbor]) {
        dist[inc.neighbor] = d + len;
        heap.emplace(dist[inc.neighbor], inc.neighbor);
      }
    }
  }
  for (VertexId v = 0; v < g.num_vertices(); ++v) {
    if (dist[v] == kInf) throw DataError("vertex " + std::to_string(v) + " is unreachable from every center");
  }
  return dist;
}

namespace {

double parse_parameter(const std::string& text, const std::string& spec) {
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(value)) {
    throw UsageError("bad parameter in filter spec \"" + spec + "\"");
  }
  return value;
}

std::string format_parameter(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

}  // namespace

FilterSpec FilterSpec::parse(const std::string& text) {
  auto colon = text.find(':');
  std::string name = text.substr(0, colon);
  std::string arg = colon == std::string::npos ? "" : text.substr(colon + 1);
  FilterSpec s;
  if (name == "degree" && colon == std::string::npos) {
    s.kind = Kind::degree;
  } else if (name == "clustering" && colon == std::string::npos) {
    s.kind = Kind::clustering;
  } else if (name == "centrality" && colon == std::string::npos) {
    s.kind = Kind::centrality;
  } else if (name == "hks" && colon != std::string::npos) {
    s.kind = Kind::hks;
    s.parameter = parse_parameter(arg, text);
    if (s.parameter <= 0.0) throw UsageError("HKS temperature must be positive: \"" + text + "\"");
  } else if (name == "ricci-dist" && colon != std::string::npos) {
    s.kind = Kind::ricci_distance;
    s.parameter = parse_parameter(arg, text);
    if (s.parameter < 0.0 || s.parameter > 1.0) throw UsageError("Ricci alpha must lie in [0, 1]: \"" + text + "\"");
  } else {
    throw UsageError("unknown filter spec \"" + text +
                     "\" (expected degree | hks:<t> | ricci-dist:<alpha> | clustering | centrality)");
  }
  return s;
}

std::string FilterSpec::to_string() const {
  switch (kind) {
    case Kind::degree: return "degree";
    case Kind::clustering: return "clustering";
    case Kind::centrality: return "centrality";
    case Kind::hks: return "hks:" + format_parameter(parameter);
    case Kind::ricci_distance: return "ricci-dist:" + format_parameter(parameter);
  }
  return "degree";
}

std::vector<double> evaluate_filter(const Graph& g, const FilterSpec& spec) {
  switch (spec.kind) {
    case FilterSpec::Kind::degree: return degree_filter(g);
    case FilterSpec::Kind::clustering: return clustering_filter(g);
    case FilterSpec::Kind::centrality: return centrality_filter(g);
    case FilterSpec::Kind::hks: return hks_filter(g, spec.parameter);
    case FilterSpec::Kind::ricci_distance: {
      if (g.num_vertices() == 0) return {};
      const VertexId center = 0;
      return ricci_distance_filter(g, std::span<const VertexId>(&center, 1), spec.parameter);
    }
  }
  return {};
}

}  // namespace gepd
