// Microbenchmarks for the exact engines and neural inference on the SBM
// graphs the bench sweep uses. Arguments are the SBM target sizes.

#include <benchmark/benchmark.h>

#include "gepd/persistence.hpp"
#include "gepd/pdgnn.hpp"
#include "gepd/timing.hpp"
#include "gepd/train.hpp"

namespace {

gepd::FilteredGraph sweep_graph(std::size_t size) {
  gepd::BenchConfig cfg;
  return gepd::bench_graph(cfg, size);
}

void annotate(benchmark::State& state, const gepd::FilteredGraph& fg) {
  state.counters["nodes"] = static_cast<double>(fg.graph.num_vertices());
  state.counters["edges"] = static_cast<double>(fg.graph.num_edges());
}

void BM_UnionFind(benchmark::State& state) {
  const auto fg = sweep_graph(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(gepd::epd_union_find(fg));
  annotate(state, fg);
}

void BM_Reduction(benchmark::State& state) {
  const auto fg = sweep_graph(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(gepd::epd_matrix_reduction(fg));
  annotate(state, fg);
}

void BM_Predict(benchmark::State& state) {
  const auto fg = sweep_graph(static_cast<std::size_t>(state.range(0)));
  const auto p = gepd::init_params(gepd::ModelConfig{}, 0);
  for (auto _ : state) benchmark::DoNotOptimize(gepd::predict(p, fg));
  annotate(state, fg);
}

void BM_ForwardBackward(benchmark::State& state) {
  const auto sample = gepd::make_sample(sweep_graph(static_cast<std::size_t>(state.range(0))));
  const auto p = gepd::init_params(gepd::ModelConfig{}, 0);
  std::vector<double> grad;
  for (auto _ : state) {
    grad.assign(p.values.size(), 0.0);
    benchmark::DoNotOptimize(gepd::sample_loss(p, sample, gepd::LossMode::forced_matching, &grad));
  }
  annotate(state, sample.graph);
}

BENCHMARK(BM_UnionFind)->DenseRange(80, 120, 20)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_Reduction)->DenseRange(80, 120, 20)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_Predict)->DenseRange(80, 120, 20)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_ForwardBackward)->Arg(80)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
