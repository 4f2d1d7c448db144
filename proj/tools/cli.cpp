#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include "gepd/diagram_io.hpp"
#include "gepd/error.hpp"
#include "gepd/graph_io.hpp"
#include "gepd/model_io.hpp"
#include "gepd/persistence_image.hpp"
#include "gepd/timing.hpp"
#include "gepd/train.hpp"

namespace gepd::cli {
namespace {

namespace fs = std::filesystem;

struct Globals {
  std::uint64_t seed = 0;
  unsigned threads = 1;
  std::string out;
};

/// Every parameter that determines an artifact's content, in a fixed
/// order. Output paths, thread counts and the exact engine are left out:
/// they do not change the bytes written.
class RunConfig {
 public:
  explicit RunConfig(std::string command) : command_(std::move(command)) {}

  RunConfig& add(const std::string& key, const std::string& value) {
    fields_ += ' ' + key + '=' + value;
    return *this;
  }
  RunConfig& add(const std::string& key, double value) { return add(key, format_real(value)); }
  RunConfig& add(const std::string& key, std::uint64_t value) { return add(key, std::to_string(value)); }
  RunConfig& add(const std::string& key, bool value) { return add(key, std::string(value ? "1" : "0")); }
  RunConfig& add(const std::string& key, const std::vector<std::string>& values) {
    std::string joined;
    for (std::size_t i = 0; i < values.size(); ++i) joined += (i ? "," : "") + values[i];
    return add(key, joined);
  }

  std::vector<std::string> comments() const {
    return {std::string("gepd ") + GEPD_VERSION, "config " + command_ + fields_};
  }

 private:
  std::string command_;
  std::string fields_;
};

std::string format_16(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.16g", v);
  return buf;
}

/// Writes through fn to the --out path, or to out when none was given.
template <typename Fn>
void emit(const Globals& g, std::ostream& out, Fn&& fn) {
  if (g.out.empty()) {
    fn(out);
    return;
  }
  std::ofstream file(g.out, std::ios::binary);
  if (!file) throw DataError("cannot write " + g.out);
  fn(file);
  if (!file) throw DataError("failed writing " + g.out);
}

struct FilterInput {
  std::string filter;
  std::string values_path;

  void attach(CLI::App* sub) {
    auto* f = sub->add_option("--filter", filter, "degree | hks:<t> | ricci-dist:<alpha> | clustering | centrality");
    auto* v = sub->add_option("--values", values_path, "filter-values file (\"v value\" lines)");
    f->excludes(v);
  }
  void record(RunConfig& cfg) const {
    if (!values_path.empty()) cfg.add("values", values_path);
    else cfg.add("filter", spec().to_string());
  }
  FilterSpec spec() const { return FilterSpec::parse(filter.empty() ? "degree" : filter); }
  FilteredGraph apply(Graph g) const {
    std::vector<double> values = values_path.empty() ? evaluate_filter(g, spec())
                                                     : read_filter_values(fs::path(values_path), g.num_vertices());
    return build_filtration(std::move(g), std::move(values));
  }
};

struct ModelFlags {
  ModelConfig cfg;
  bool no_min = false;
  bool no_edge_messages = false;
  bool no_attention = false;

  void attach(CLI::App* sub) {
    sub->add_option("--hidden", cfg.hidden_dim, "hidden width")->capture_default_str();
    sub->add_option("--layers", cfg.num_layers, "message-passing layers")->capture_default_str();
    sub->add_option("--head-hidden", cfg.head_hidden, "hidden width of the prediction head")->capture_default_str();
    sub->add_flag("--no-min", no_min, "sum aggregation only");
    sub->add_flag("--no-edge-messages", no_edge_messages, "messages read the neighbor only");
    sub->add_flag("--no-attention", no_attention, "unit edge weights");
    sub->add_flag("--symmetric-head", cfg.symmetric_head, "average both endpoint orders in the head");
  }
  ModelConfig resolve() const {
    ModelConfig out = cfg;
    out.min_aggregation = !no_min;
    out.edge_messages = !no_edge_messages;
    out.attention = !no_attention;
    layout_of(out);
    return out;
  }
};

std::vector<fs::path> graph_files(const std::vector<std::string>& inputs) {
  std::vector<fs::path> out;
  for (const auto& in : inputs) {
    const fs::path p(in);
    if (fs::is_directory(p)) {
      std::vector<fs::path> found;
      for (const auto& entry : fs::directory_iterator(p)) {
        if (entry.is_regular_file() && entry.path().extension() == ".txt") found.push_back(entry.path());
      }
      std::sort(found.begin(), found.end());
      out.insert(out.end(), found.begin(), found.end());
    } else if (fs::is_regular_file(p)) {
      out.push_back(p);
    } else {
      throw DataError("no such graph file or directory: " + in);
    }
  }
  if (out.empty()) throw DataError("no graph files found");
  return out;
}

// ---- subcommands ----

struct ComputeCmd {
  std::string graph;
  FilterInput input;
  std::string engine = "unionfind";
  bool drop_zero = false;

  void attach(CLI::App* sub) {
    sub->add_option("--graph", graph, "edge-list file")->required();
    input.attach(sub);
    sub->add_option("--engine", engine, "unionfind | reduction")
        ->check(CLI::IsMember({"unionfind", "reduction"}))
        ->capture_default_str();
    sub->add_flag("--drop-zero", drop_zero, "leave out zero-persistence points");
  }

  int run(const Globals& g, std::ostream& out) const {
    RunConfig cfg("compute");
    cfg.add("graph", graph);
    input.record(cfg);
    cfg.add("drop_zero", drop_zero);
    const FilteredGraph fg = input.apply(read_edge_list(fs::path(graph)));
    const PersistenceDiagram full = engine == "reduction" ? epd_matrix_reduction(fg) : epd_union_find(fg, g.threads);
    const EdgePairingMap pairs = edge_pairings(fg, full);
    const PersistenceDiagram written = drop_zero ? full.without_zero_persistence() : full;
    emit(g, out, [&](std::ostream& s) { write_diagram(s, written, cfg.comments()); });
    if (!g.out.empty()) {
      auto comments = cfg.comments();
      comments.push_back("engine " + engine);
      write_edge_pairings(fs::path(g.out + ".pairs"), fg.graph, pairs, comments);
    }
    return kSuccess;
  }
};

struct VicinityCmd {
  std::string graph;
  std::size_t k = 1;

  void attach(CLI::App* sub) {
    sub->add_option("--graph", graph, "edge-list file")->required();
    sub->add_option("--k", k, "hop radius")->required();
  }

  int run(const Globals& g, std::ostream&) const {
    if (g.out.empty()) throw UsageError("vicinity needs --out <directory>");
    const Graph input = read_edge_list(fs::path(graph));
    fs::create_directories(g.out);
    for (VertexId c = 0; c < input.num_vertices(); ++c) {
      const Subgraph sub = khop_vicinity(input, c, k);
      RunConfig cfg("vicinity");
      cfg.add("graph", graph).add("k", static_cast<std::uint64_t>(k)).add("center", static_cast<std::uint64_t>(c));
      auto comments = cfg.comments();
      std::string ids = "original_ids";
      for (VertexId v : sub.original_ids) ids += ' ' + std::to_string(v);
      comments.push_back(ids);
      write_edge_list(fs::path(g.out) / ("vicinity_" + std::to_string(c) + ".txt"), sub.graph, comments);
    }
    return kSuccess;
  }
};

struct GenSbmCmd {
  SbmConfig sbm;

  void attach(CLI::App* sub) {
    sub->add_option("--vertices", sbm.num_vertices, "number of vertices")->required();
    sub->add_option("--clusters", sbm.num_clusters, "number of blocks")->capture_default_str();
    sub->add_option("--p-intra", sbm.p_intra, "edge probability inside a block")->required();
    sub->add_option("--p-inter", sbm.p_inter, "edge probability across blocks")->required();
  }

  int run(const Globals& g, std::ostream& out) const {
    SbmConfig c = sbm;
    c.seed = g.seed;
    RunConfig cfg("gen-sbm");
    cfg.add("vertices", static_cast<std::uint64_t>(c.num_vertices))
        .add("clusters", static_cast<std::uint64_t>(c.num_clusters))
        .add("p_intra", c.p_intra)
        .add("p_inter", c.p_inter)
        .add("seed", c.seed);
    const Graph graph = sbm_generate(c);
    emit(g, out, [&](std::ostream& s) { write_edge_list(s, graph, cfg.comments()); });
    return kSuccess;
  }
};

struct DistCmd {
  std::string a;
  std::string b;
  std::string metric = "euclidean";

  void attach(CLI::App* sub) {
    sub->add_option("a", a, "diagram file")->required();
    sub->add_option("b", b, "diagram file")->required();
    sub->add_option("--metric", metric, "euclidean | chebyshev")
        ->check(CLI::IsMember({"euclidean", "chebyshev"}))
        ->capture_default_str();
  }

  int run(const Globals&, std::ostream& out) const {
    const auto pa = diagram_points(read_diagram(fs::path(a)));
    const auto pb = diagram_points(read_diagram(fs::path(b)));
    const GroundMetric m = metric == "chebyshev" ? GroundMetric::chebyshev : GroundMetric::euclidean;
    out << format_16(wasserstein2(pa, pb, m).distance) << '\n';
    return kSuccess;
  }
};

struct ImageCmd {
  std::string diagram;
  std::size_t resolution = 5;
  std::vector<double> bounds;
  std::optional<double> sigma;
  std::string weight = "linear";

  void attach(CLI::App* sub) {
    sub->add_option("diagram", diagram, "diagram file")->required();
    sub->add_option("--resolution", resolution, "grid side")->capture_default_str();
    sub->add_option("--bounds", bounds, "square [min, max]")->expected(2);
    sub->add_option("--sigma", sigma, "Gaussian bandwidth");
    sub->add_option("--weight", weight, "linear | constant")
        ->check(CLI::IsMember({"linear", "constant"}))
        ->capture_default_str();
  }

  int run(const Globals& g, std::ostream& out) const {
    const auto points = diagram_points(read_diagram(fs::path(diagram)));
    ImageParams params;
    params.resolution = resolution;
    if (!bounds.empty()) params.bounds = std::make_pair(bounds[0], bounds[1]);
    params.sigma = sigma;
    params.weight_mode = weight;
    const PersistenceImage img = persistence_image(points, params);
    RunConfig cfg("image");
    cfg.add("diagram", diagram).add("resolution", static_cast<std::uint64_t>(resolution));
    cfg.add("bounds", format_real(img.lo) + "," + format_real(img.hi)).add("sigma", img.sigma).add("weight", weight);
    emit(g, out, [&](std::ostream& s) { write_image(s, img, cfg.comments()); });
    return kSuccess;
  }
};

struct PieCmd {
  std::string a;
  std::string b;

  void attach(CLI::App* sub) {
    sub->add_option("a", a, "image file")->required();
    sub->add_option("b", b, "image file")->required();
  }

  int run(const Globals&, std::ostream& out) const {
    out << format_16(pie(read_image(fs::path(a)), read_image(fs::path(b)))) << '\n';
    return kSuccess;
  }
};

struct TrainCmd {
  std::vector<std::string> data;
  FilterInput input;
  TrainConfig train_cfg;
  std::string loss = "forced-matching";
  ModelFlags model;
  std::string history;
  std::string init_model;

  void attach(CLI::App* sub) {
    sub->add_option("--data", data, "graph files or directories of *.txt edge lists")->required();
    sub->add_option("--filter", input.filter, "filter spec applied to every graph");
    sub->add_option("--epochs", train_cfg.epochs)->capture_default_str();
    sub->add_option("--lr", train_cfg.learning_rate)->capture_default_str();
    sub->add_option("--weight-decay", train_cfg.weight_decay)->capture_default_str();
    sub->add_option("--batch", train_cfg.batch_size)->capture_default_str();
    sub->add_option("--test-fraction", train_cfg.test_fraction)->capture_default_str();
    sub->add_option("--loss", loss, "forced-matching | per-edge")->capture_default_str();
    sub->add_option("--history", history, "per-epoch history output");
    sub->add_option("--init-model", init_model, "start from this model instead of a seeded init");
    model.attach(sub);
  }

  int run(const Globals& g, std::ostream& out) const {
    TrainConfig tc = train_cfg;
    tc.seed = g.seed;
    tc.loss_mode = parse_loss_mode(loss);
    tc.validate();
    const auto files = graph_files(data);
    std::vector<FilteredGraph> graphs;
    graphs.reserve(files.size());
    for (const auto& f : files) graphs.push_back(input.apply(read_edge_list(f)));
    const std::vector<TrainingSample> samples = make_samples(std::move(graphs), g.threads);

    RunConfig cfg("train");
    cfg.add("data", data);
    input.record(cfg);
    cfg.add("train", tc.to_string());
    ModelParams start;
    if (init_model.empty()) {
      start = init_params(model.resolve(), tc.seed);
      cfg.add("model", start.config.to_string());
    } else {
      start = read_model(fs::path(init_model));
      cfg.add("init_model", init_model);
    }
    const TrainResult result = train(tc, std::move(start), samples, g.threads);
    const auto comments = cfg.comments();
    if (!history.empty()) write_history(fs::path(history), result.history, comments);
    if (g.out.empty()) write_model_text(out, result.params, comments);
    else write_model(fs::path(g.out), result.params, comments);
    return kSuccess;
  }
};

struct InferCmd {
  std::string model;
  std::string graph;
  FilterInput input;
  double epsilon = 0.0;

  void attach(CLI::App* sub) {
    sub->add_option("--model", model, "model file")->required();
    sub->add_option("--graph", graph, "edge-list file")->required();
    input.attach(sub);
    sub->add_option("--epsilon", epsilon, "leave out points with |death - birth| < epsilon")->capture_default_str();
  }

  int run(const Globals& g, std::ostream& out) const {
    const ModelParams p = read_model(fs::path(model));
    const FilteredGraph fg = input.apply(read_edge_list(fs::path(graph)));
    const PersistenceDiagram d = predict_diagram(p, fg, epsilon);
    RunConfig cfg("infer");
    cfg.add("model", model).add("graph", graph);
    input.record(cfg);
    cfg.add("epsilon", epsilon);
    emit(g, out, [&](std::ostream& s) { write_diagram(s, d, cfg.comments()); });
    return kSuccess;
  }
};

struct BenchCmd {
  BenchConfig bench;
  std::string model;
  bool init_model = false;

  void attach(CLI::App* sub) {
    sub->add_option("--from", bench.size_from, "smallest SBM size")->capture_default_str();
    sub->add_option("--to", bench.size_to, "largest SBM size")->capture_default_str();
    sub->add_option("--step", bench.size_step, "size step")->capture_default_str();
    sub->add_option("--clusters", bench.clusters)->capture_default_str();
    sub->add_option("--p-intra", bench.p_intra)->capture_default_str();
    sub->add_option("--p-inter", bench.p_inter)->capture_default_str();
    sub->add_option("--reps", bench.repetitions, "timed repetitions (>= 3)")->capture_default_str();
    sub->add_option("--filter", bench.filter)->capture_default_str();
    sub->add_option("--engines", bench.engines, "comma-separated subset of unionfind,reduction,neural")
        ->delimiter(',');
    sub->add_option("--min-sample-seconds", bench.min_sample_seconds)->capture_default_str();
    sub->add_option("--machine-note", bench.machine_note);
    auto* m = sub->add_option("--model", model, "trained model for the neural engine");
    auto* i = sub->add_flag("--init-model", init_model, "time the neural engine with seeded untrained weights");
    m->excludes(i);
  }

  int run(const Globals& g, std::ostream& out) const {
    BenchConfig c = bench;
    c.seed = g.seed;
    std::optional<ModelParams> params;
    if (!model.empty()) params = read_model(fs::path(model));
    else if (init_model) params = init_params(ModelConfig{}, g.seed);
    const TimingReport report = run_bench(c, params ? &*params : nullptr);
    RunConfig cfg("bench");
    cfg.add("bench", c.to_string()).add("model", model.empty() ? std::string(init_model ? "init" : "-") : model);
    emit(g, out, [&](std::ostream& s) { write_timing_report(s, report, cfg.comments()); });
    return kSuccess;
  }
};

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Extended persistence diagrams of graph filtrations: exact engines and a neural approximator", "gepd"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals globals;
  app.add_option("--seed", globals.seed, "random seed")->capture_default_str();
  app.add_option("--threads", globals.threads, "worker threads")->capture_default_str();
  app.add_option("--out", globals.out, "output file or directory");
  app.set_version_flag("--version", std::string("gepd ") + GEPD_VERSION);

  ComputeCmd compute;
  VicinityCmd vicinity;
  GenSbmCmd gen_sbm;
  DistCmd dist;
  ImageCmd image;
  PieCmd pie_cmd;
  TrainCmd train_cmd;
  InferCmd infer;
  BenchCmd bench;
  auto* s_compute = app.add_subcommand("compute", "exact diagram of a filtered graph");
  auto* s_vicinity = app.add_subcommand("vicinity", "k-hop vicinity graph of every vertex");
  auto* s_gen = app.add_subcommand("gen-sbm", "stochastic block model graph");
  auto* s_dist = app.add_subcommand("dist", "2-Wasserstein distance between two diagrams");
  auto* s_image = app.add_subcommand("image", "persistence image of a diagram");
  auto* s_pie = app.add_subcommand("pie", "squared difference between two persistence images");
  auto* s_train = app.add_subcommand("train", "train the neural approximator");
  auto* s_infer = app.add_subcommand("infer", "predicted diagram of a filtered graph");
  auto* s_bench = app.add_subcommand("bench", "time exact and neural engines over an SBM size sweep");
  compute.attach(s_compute);
  vicinity.attach(s_vicinity);
  gen_sbm.attach(s_gen);
  dist.attach(s_dist);
  image.attach(s_image);
  pie_cmd.attach(s_pie);
  train_cmd.attach(s_train);
  infer.attach(s_infer);
  bench.attach(s_bench);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kUsage;
  }

  try {
    if (*s_compute) return compute.run(globals, out);
    if (*s_vicinity) return vicinity.run(globals, out);
    if (*s_gen) return gen_sbm.run(globals, out);
    if (*s_dist) return dist.run(globals, out);
    if (*s_image) return image.run(globals, out);
    if (*s_pie) return pie_cmd.run(globals, out);
    if (*s_train) return train_cmd.run(globals, out);
    if (*s_infer) return infer.run(globals, out);
    if (*s_bench) return bench.run(globals, out);
  } catch (const UsageError& e) {
    err << "gepd: " << e.what() << '\n';
    return kUsage;
  } catch (const DataError& e) {
    err << "gepd: " << e.what() << '\n';
    return kDataError;
  } catch (const std::exception& e) {
    err << "gepd: internal error: " << e.what() << '\n';
    return kInvariant;
  }
  return kUsage;
}

}  // namespace gepd::cli
