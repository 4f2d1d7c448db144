#include <doctest.h>

#include <algorithm>
#include <set>
#include <sstream>

#include "gepd/error.hpp"
#include "gepd/graph.hpp"
#include "gepd/graph_io.hpp"
#include "gepd/rng.hpp"
#include "oracles.hpp"

using namespace gepd;

namespace {

Graph path_graph(std::size_t n) {
  std::vector<std::pair<VertexId, VertexId>> edges;
  for (VertexId i = 0; i + 1 < n; ++i) edges.emplace_back(i, i + 1);
  return Graph(n, edges);
}

}  // namespace

TEST_CASE("rng is reproducible and in range") {
  Rng a(42), b(42), c(43);
  bool differs = false;
  for (int i = 0; i < 1000; ++i) {
    const double x = a.uniform();
    CHECK(x == b.uniform());
    CHECK(x >= 0.0);
    CHECK(x < 1.0);
    differs = differs || x != c.uniform();
  }
  CHECK(differs);
  Rng r(7);
  std::vector<int> hits(5, 0);
  for (int i = 0; i < 5000; ++i) ++hits[r.below(5)];
  for (int h : hits) CHECK(h > 800);
  std::vector<int> items{0, 1, 2, 3, 4, 5, 6, 7};
  r.shuffle(items);
  std::vector<int> sorted = items;
  std::sort(sorted.begin(), sorted.end());
  CHECK(sorted == std::vector<int>{0, 1, 2, 3, 4, 5, 6, 7});
}

TEST_CASE("first mt19937_64 output matches the standard's check value") {
  // The 10000th output of a default-seeded mt19937_64 is fixed by the
  // standard; a same-seeded Rng must produce the same raw stream.
  Rng r(5489u);
  std::uint64_t x = 0;
  for (int i = 0; i < 10000; ++i) x = r.next_u64();
  CHECK(x == 9981545732273789042ull);
}

TEST_CASE("graph construction canonicalizes edges") {
  std::vector<std::pair<VertexId, VertexId>> raw{{3, 1}, {1, 3}, {2, 2}, {0, 1}, {1, 0}, {2, 3}};
  Graph g(4, raw);
  REQUIRE(g.num_edges() == 3);
  CHECK(g.edge(0) == Edge{0, 1});
  CHECK(g.edge(1) == Edge{1, 3});
  CHECK(g.edge(2) == Edge{2, 3});
  CHECK(g.degree(1) == 2);
  CHECK(g.degree(2) == 1);
  auto inc = g.incident(3);
  REQUIRE(inc.size() == 2);
  CHECK(inc[0].neighbor == 1);
  CHECK(inc[0].edge == 1);
  CHECK(inc[1].neighbor == 2);
  CHECK(inc[1].edge == 2);

  std::vector<std::pair<VertexId, VertexId>> bad{{0, 4}};
  CHECK_THROWS_AS(Graph(4, bad), DataError);
}

TEST_CASE("adjacency agrees with the edge list on random graphs") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    Graph g = oracle::erdos_renyi(15, 0.3, seed);
    std::size_t total = 0;
    for (VertexId v = 0; v < g.num_vertices(); ++v) {
      VertexId prev = 0;
      bool first = true;
      for (const auto& inc : g.incident(v)) {
        const Edge& e = g.edge(inc.edge);
        CHECK(((e.u == v && e.v == inc.neighbor) || (e.v == v && e.u == inc.neighbor)));
        if (!first) CHECK(inc.neighbor > prev);
        prev = inc.neighbor;
        first = false;
        ++total;
      }
    }
    CHECK(total == 2 * g.num_edges());
  }
}

TEST_CASE("connected components match reachability") {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    Graph g = oracle::erdos_renyi(12, 0.12, seed);
    const auto cc = connected_components(g);
    const auto hops = oracle::all_pairs_hops(g);
    CHECK(cc.count == oracle::component_count(g));
    for (VertexId u = 0; u < g.num_vertices(); ++u) {
      for (VertexId v = 0; v < g.num_vertices(); ++v) {
        CHECK((cc.label[u] == cc.label[v]) == (hops[u][v] < oracle::kUnreachable));
      }
    }
  }
}

TEST_CASE("k-hop vicinity equals the hop-ball induced subgraph") {
  for (std::uint64_t seed = 1; seed <= 15; ++seed) {
    Graph g = oracle::erdos_renyi(14, 0.2, seed);
    const auto hops = oracle::all_pairs_hops(g);
    for (VertexId c = 0; c < g.num_vertices(); c += 3) {
      for (std::size_t k = 0; k <= 3; ++k) {
        Subgraph s = khop_vicinity(g, c, k);
        std::set<VertexId> expect;
        for (VertexId v = 0; v < g.num_vertices(); ++v) {
          if (hops[c][v] <= static_cast<int>(k)) expect.insert(v);
        }
        REQUIRE(s.original_ids.size() == expect.size());
        CHECK(s.original_ids[0] == c);
        CHECK(std::is_sorted(s.original_ids.begin() + 1, s.original_ids.end()));
        CHECK(std::set<VertexId>(s.original_ids.begin(), s.original_ids.end()) == expect);
        std::size_t induced = 0;
        for (const Edge& e : g.edges()) induced += expect.count(e.u) && expect.count(e.v);
        CHECK(s.graph.num_edges() == induced);
        for (const Edge& e : s.graph.edges()) {
          CHECK(hops[s.original_ids[e.u]][s.original_ids[e.v]] == 1);
        }
      }
    }
  }
}

TEST_CASE("vicinities of a path") {
  Graph g = path_graph(4);
  const std::vector<std::size_t> sizes{2, 3, 3, 2};
  for (VertexId c = 0; c < 4; ++c) CHECK(khop_vicinity(g, c, 1).graph.num_vertices() == sizes[c]);
  CHECK(khop_vicinity(g, 0, 0).graph.num_vertices() == 1);
  CHECK_THROWS_AS(khop_vicinity(g, 4, 1), DataError);
}

TEST_CASE("largest connected subgraph") {
  std::vector<std::pair<VertexId, VertexId>> edges{{0, 1}, {2, 3}, {3, 4}, {5, 6}, {6, 7}};
  Graph g(8, edges);
  Subgraph s = largest_connected_subgraph(g);
  CHECK(s.original_ids == std::vector<VertexId>{2, 3, 4});
  CHECK(s.graph.num_edges() == 2);
  Graph empty;
  CHECK(largest_connected_subgraph(empty).graph.num_vertices() == 0);
}

TEST_CASE("sbm is deterministic and respects the block structure") {
  SbmConfig cfg{23, 4, 0.9, 0.05, 11};
  Graph a = sbm_generate(cfg);
  Graph b = sbm_generate(cfg);
  CHECK(a == b);
  cfg.seed = 12;
  CHECK(!(sbm_generate(cfg) == a));
  // Blocks 6, 6, 6, 5.
  CHECK(sbm_cluster_of(cfg, 5) == 0);
  CHECK(sbm_cluster_of(cfg, 6) == 1);
  CHECK(sbm_cluster_of(cfg, 17) == 2);
  CHECK(sbm_cluster_of(cfg, 18) == 3);
  CHECK(sbm_cluster_of(cfg, 22) == 3);

  SbmConfig big{200, 4, 0.5, 0.02, 3};
  Graph g = sbm_generate(big);
  std::size_t intra = 0, inter = 0;
  for (const Edge& e : g.edges()) (sbm_cluster_of(big, e.u) == sbm_cluster_of(big, e.v) ? intra : inter)++;
  const double intra_pairs = 4.0 * 50 * 49 / 2;
  const double inter_pairs = 200.0 * 199 / 2 - intra_pairs;
  CHECK(intra / intra_pairs == doctest::Approx(0.5).epsilon(0.1));
  CHECK(inter / inter_pairs == doctest::Approx(0.02).epsilon(0.25));
}

TEST_CASE("edge list round trip and errors") {
  Graph g = oracle::erdos_renyi(9, 0.4, 5);
  std::ostringstream out;
  write_edge_list(out, g, {"made by a test"});
  CHECK(out.str().rfind("# made by a test\n", 0) == 0);
  std::istringstream in(out.str());
  CHECK(read_edge_list(in) == g);

  auto error_of = [](const std::string& text) {
    std::istringstream s(text);
    try {
      read_edge_list(s);
    } catch (const DataError& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  CHECK(error_of("# c\n3 1\n0 5\n").find("line 3") != std::string::npos);
  CHECK(error_of("3 2\n0 1\n").find("declares 2") != std::string::npos);
  CHECK(error_of("3 1\n0 x\n").find("line 2") != std::string::npos);
  CHECK(error_of("").find("header") != std::string::npos);
  std::istringstream blank("\n  # comment\n2 1\n\n1 0\n");
  CHECK(read_edge_list(blank).num_edges() == 1);
}
