#include <doctest.h>

#include "gepd/error.hpp"
#include "gepd/timing.hpp"

using namespace gepd;

TEST_CASE("order statistics") {
  CHECK(median({3.0, 1.0, 2.0}) == 2.0);
  CHECK(median({4.0, 1.0, 2.0, 3.0}) == 2.5);
  CHECK(quantile({1.0, 2.0, 3.0, 4.0, 5.0}, 0.25) == 2.0);
  CHECK(quantile({1.0, 2.0}, 0.5) == 1.5);
  CHECK(quantile({7.0}, 0.9) == 7.0);
  CHECK(quantile({1.0, 5.0, 3.0}, 1.0) == 5.0);
}

TEST_CASE("timed calls") {
  int calls = 0;
  const auto samples = time_calls([&] { ++calls; }, 3, 0.0);
  CHECK(samples.size() == 3);
  CHECK(calls >= 4);
  for (double s : samples) CHECK(s >= 0.0);
}

TEST_CASE("bench configuration") {
  BenchConfig cfg;
  CHECK(cfg.sizes() == std::vector<std::size_t>{80, 84, 88, 92, 96, 100, 104, 108, 112, 116, 120});
  CHECK_NOTHROW(cfg.validate());
  cfg.repetitions = 2;
  CHECK_THROWS_AS(cfg.validate(), UsageError);
  cfg.repetitions = 3;
  cfg.engines = {"gpu"};
  CHECK_THROWS_AS(cfg.validate(), UsageError);
  cfg.engines = {"neural"};
  CHECK_THROWS_AS(run_bench(cfg, nullptr), UsageError);
}

TEST_CASE("a one-size sweep") {
  BenchConfig cfg;
  cfg.size_from = cfg.size_to = 30;
  cfg.repetitions = 3;
  cfg.min_sample_seconds = 0.0;
  cfg.engines = {"unionfind", "reduction"};
  const auto report = run_bench(cfg, nullptr);
  REQUIRE(report.buckets.size() == 2);
  const auto fg = bench_graph(cfg, 30);
  for (const auto& b : report.buckets) {
    CHECK(b.samples.size() == 3);
    CHECK(b.nodes == fg.graph.num_vertices());
    CHECK(b.edges == fg.graph.num_edges());
    CHECK(b.median_seconds == median(b.samples));
  }
  CHECK(report.buckets[0].engine == "unionfind");
}
