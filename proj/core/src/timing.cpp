#include "gepd/timing.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <ostream>
#include <sstream>

#include "gepd/diagram_io.hpp"
#include "gepd/error.hpp"
#include "gepd/persistence.hpp"
#include "gepd/train.hpp"

namespace gepd {

void BenchConfig::validate() const {
  if (size_step == 0 || size_from == 0 || size_to < size_from) throw UsageError("bench size sweep is empty");
  if (repetitions < 3) throw UsageError("bench needs at least 3 repetitions");
  if (clusters == 0) throw UsageError("bench needs at least one cluster");
  if (engines.empty()) throw UsageError("bench needs at least one engine");
  for (const auto& e : engines) {
    if (std::find(kBenchEngines.begin(), kBenchEngines.end(), e) == kBenchEngines.end()) {
      throw UsageError("unknown bench engine \"" + e + "\"");
    }
  }
  FilterSpec::parse(filter);
}

std::vector<std::size_t> BenchConfig::sizes() const {
  std::vector<std::size_t> out;
  for (std::size_t s = size_from; s <= size_to; s += size_step) out.push_back(s);
  return out;
}

std::string BenchConfig::to_string() const {
  std::ostringstream s;
  s << "sizes=" << size_from << ":" << size_to << ":" << size_step << " clusters=" << clusters
    << " p_intra=" << format_real(p_intra) << " p_inter=" << format_real(p_inter) << " reps=" << repetitions
    << " seed=" << seed << " filter=" << filter << " engines=";
  for (std::size_t i = 0; i < engines.size(); ++i) s << (i ? "," : "") << engines[i];
  return s.str();
}

double median(std::vector<double> samples) {
  if (samples.empty()) throw DataError("median of no samples");
  std::sort(samples.begin(), samples.end());
  const std::size_t n = samples.size();
  return n % 2 ? samples[n / 2] : 0.5 * (samples[n / 2 - 1] + samples[n / 2]);
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

// Warm-up call, then the number of calls that fills min_sample_seconds.
std::size_t calibrate(const std::function<void()>& fn, double min_sample_seconds) {
  const auto t0 = Clock::now();
  fn();
  const double single = std::max(seconds_since(t0), 1e-9);
  return std::max<std::size_t>(1, static_cast<std::size_t>(min_sample_seconds / single) + 1);
}

double sample(const std::function<void()>& fn, std::size_t calls) {
  const auto t0 = Clock::now();
  for (std::size_t c = 0; c < calls; ++c) fn();
  return std::max(seconds_since(t0) / static_cast<double>(calls), 1e-12);
}

}  // namespace

double quantile(std::vector<double> samples, double q) {
  if (samples.empty()) throw DataError("quantile of no samples");
  std::sort(samples.begin(), samples.end());
  const double pos = std::clamp(q, 0.0, 1.0) * static_cast<double>(samples.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(pos);
  const std::size_t hi = std::min(lo + 1, samples.size() - 1);
  return samples[lo] + (pos - static_cast<double>(lo)) * (samples[hi] - samples[lo]);
}

FilteredGraph bench_graph(const BenchConfig& cfg, std::size_t size) {
  SbmConfig sbm{size, cfg.clusters, cfg.p_intra, cfg.p_inter, cfg.seed + size};
  const Subgraph sub = largest_connected_subgraph(sbm_generate(sbm));
  return build_filtration(sub.graph, evaluate_filter(sub.graph, FilterSpec::parse(cfg.filter)));
}

std::vector<double> time_calls(const std::function<void()>& fn, std::size_t repetitions, double min_sample_seconds) {
  const std::size_t calls = calibrate(fn, min_sample_seconds);
  std::vector<double> out;
  out.reserve(repetitions);
  for (std::size_t r = 0; r < repetitions; ++r) out.push_back(sample(fn, calls));
  return out;
}

TimingReport run_bench(const BenchConfig& cfg, const ModelParams* model) {
  cfg.validate();
  const bool wants_neural = std::find(cfg.engines.begin(), cfg.engines.end(), "neural") != cfg.engines.end();
  if (wants_neural && model == nullptr) throw UsageError("the neural engine needs a model");
  std::vector<FilteredGraph> graphs;
  for (std::size_t size : cfg.sizes()) graphs.push_back(bench_graph(cfg, size));

  TimingReport report;
  report.config = cfg;
  std::vector<std::function<void()>> jobs;
  for (std::size_t i = 0; i < graphs.size(); ++i) {
    const FilteredGraph& fg = graphs[i];
    for (const auto& engine : cfg.engines) {
      if (engine == "unionfind") jobs.emplace_back([&fg] { (void)epd_union_find(fg); });
      else if (engine == "reduction") jobs.emplace_back([&fg] { (void)epd_matrix_reduction(fg); });
      else jobs.emplace_back([&fg, model] { (void)predict_diagram(*model, fg); });
      TimingBucket b;
      b.engine = engine;
      b.target_vertices = cfg.sizes()[i];
      b.nodes = fg.graph.num_vertices();
      b.edges = fg.graph.num_edges();
      report.buckets.push_back(b);
    }
  }

  // Round-robin, so slow drift of the machine affects every bucket alike.
  std::vector<std::size_t> calls(jobs.size());
  for (std::size_t j = 0; j < jobs.size(); ++j) calls[j] = calibrate(jobs[j], cfg.min_sample_seconds);
  std::vector<std::vector<double>> samples(jobs.size());
  for (std::size_t r = 0; r < cfg.repetitions; ++r) {
    for (std::size_t j = 0; j < jobs.size(); ++j) samples[j].push_back(sample(jobs[j], calls[j]));
  }
  for (std::size_t j = 0; j < jobs.size(); ++j) {
    TimingBucket& b = report.buckets[j];
    b.samples = samples[j];
    b.repetitions = samples[j].size();
    b.median_seconds = median(samples[j]);
    double total = 0.0;
    for (double v : samples[j]) total += v;
    b.mean_seconds = total / static_cast<double>(samples[j].size());
  }
  return report;
}

void write_timing_report(std::ostream& out, const TimingReport& report, const std::vector<std::string>& comments) {
  for (const auto& c : comments) out << "# " << c << '\n';
  out << "# bench " << report.config.to_string() << '\n';
  if (!report.config.machine_note.empty()) out << "# machine " << report.config.machine_note << '\n';
  out << "engine target_vertices nodes edges repetitions median_seconds mean_seconds\n";
  for (const auto& b : report.buckets) {
    out << b.engine << ' ' << b.target_vertices << ' ' << b.nodes << ' ' << b.edges << ' ' << b.repetitions << ' '
        << format_real(b.median_seconds) << ' ' << format_real(b.mean_seconds) << '\n';
  }
}

void write_timing_report(const std::filesystem::path& path, const TimingReport& report,
                         const std::vector<std::string>& comments) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write timing report " + path.string());
  write_timing_report(out, report, comments);
}

}  // namespace gepd
