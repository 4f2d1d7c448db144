#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "gepd/pdgnn.hpp"

namespace gepd {

/// Engines a bench sweep can time.
inline const std::vector<std::string> kBenchEngines = {"unionfind", "reduction", "neural"};

struct BenchConfig {
  std::size_t size_from = 80;
  std::size_t size_to = 120;
  std::size_t size_step = 4;
  std::size_t clusters = 5;
  double p_intra = 0.4;
  double p_inter = 0.1;
  std::size_t repetitions = 5;
  std::uint64_t seed = 0;
  std::string filter = "degree";
  std::vector<std::string> engines = kBenchEngines;
  /// Each repetition loops the engine until at least this much wall time
  /// has passed and reports the per-call time.
  double min_sample_seconds = 0.01;
  std::string machine_note;

  /// Throws UsageError on an empty sweep, fewer than 3 repetitions or an
  /// unknown engine.
  void validate() const;
  std::vector<std::size_t> sizes() const;
  std::string to_string() const;
};

struct TimingBucket {
  std::string engine;
  std::size_t target_vertices = 0;  // SBM size before taking the largest component
  std::size_t nodes = 0;
  std::size_t edges = 0;
  std::size_t repetitions = 0;
  double median_seconds = 0.0;
  double mean_seconds = 0.0;
  std::vector<double> samples;  // per-call seconds, one per repetition
};

struct TimingReport {
  BenchConfig config;
  std::vector<TimingBucket> buckets;  // by size, then engine in config order
};

/// Median of the samples; the mean of the middle two for an even count.
double median(std::vector<double> samples);
/// Linear-interpolated quantile, q in [0, 1].
double quantile(std::vector<double> samples, double q);

/// Per-call wall time of fn: one discarded warm-up call, then
/// `repetitions` samples on a monotonic clock.
std::vector<double> time_calls(const std::function<void()>& fn, std::size_t repetitions, double min_sample_seconds);

/// Largest connected subgraph of the SBM graph a sweep uses for `size`,
/// with the configured filter.
FilteredGraph bench_graph(const BenchConfig& cfg, std::size_t size);

/// Times every engine on the largest connected subgraph of an SBM graph per
/// sweep size. Repetitions run round-robin over all buckets, so slow drift
/// of the machine spreads evenly. model is required when "neural" is among
/// the engines (throws UsageError otherwise).
TimingReport run_bench(const BenchConfig& cfg, const ModelParams* model);

/// Header line "engine target_vertices nodes edges repetitions
/// median_seconds mean_seconds", then one line per bucket.
void write_timing_report(std::ostream& out, const TimingReport& report, const std::vector<std::string>& comments = {});
void write_timing_report(const std::filesystem::path& path, const TimingReport& report,
                         const std::vector<std::string>& comments = {});

}  // namespace gepd
