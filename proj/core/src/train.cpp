#include "gepd/train.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>

#include "gepd/diagram_io.hpp"
#include "gepd/error.hpp"
#include "gepd/persistence_image.hpp"
#include "gepd/rng.hpp"
#include "parallel.hpp"

namespace gepd {
namespace {

constexpr std::uint64_t kShuffleStream = 0x9E3779B97F4A7C15ull;

}  // namespace

std::string to_string(LossMode mode) {
  return mode == LossMode::forced_matching ? "forced-matching" : "per-edge";
}

LossMode parse_loss_mode(const std::string& name) {
  if (name == "forced-matching") return LossMode::forced_matching;
  if (name == "per-edge") return LossMode::per_edge;
  throw UsageError("unknown loss mode \"" + name + "\" (expected forced-matching or per-edge)");
}

TrainingSample make_sample(FilteredGraph fg) {
  TrainingSample s;
  s.truth = epd_union_find(fg);
  const EdgePairingMap map = edge_pairings(fg, s.truth);
  s.targets.reserve(map.entries.size());
  for (const auto& entry : map.entries) s.targets.push_back({entry.pair.birth, entry.pair.death});
  s.graph = std::move(fg);
  return s;
}

std::vector<TrainingSample> make_samples(std::vector<FilteredGraph> graphs, unsigned threads) {
  std::vector<TrainingSample> out(graphs.size());
  detail::parallel_for(graphs.size(), threads,
                       [&](std::size_t i, unsigned) { out[i] = make_sample(std::move(graphs[i])); });
  return out;
}

double sample_loss(const ModelParams& p, const TrainingSample& s, LossMode mode, std::vector<double>* grad) {
  const std::size_t m = s.graph.graph.num_edges();
  if (s.targets.size() != m) {
    throw DataError("sample has " + std::to_string(s.targets.size()) + " targets for " + std::to_string(m) +
                    " edges");
  }
  ForwardResult fwd;
  if (grad) fwd = forward(p, s.graph);
  else fwd.predictions = predict(p, s.graph);
  std::vector<DiagramPoint> d_pred(m);
  double loss = 0.0;
  auto residual = [&](std::size_t i, std::size_t j) {
    const double db = fwd.predictions[i].birth - s.targets[j].birth;
    const double dd = fwd.predictions[i].death - s.targets[j].death;
    d_pred[i] = {2.0 * db, 2.0 * dd};
    return db * db + dd * dd;
  };
  if (mode == LossMode::forced_matching) {
    const MatchingResult match = forced_matching_loss(fwd.predictions, s.targets);
    for (const auto& pair : match.assignment) loss += residual(pair.left, pair.right);
  } else {
    for (std::size_t e = 0; e < m; ++e) loss += residual(e, e);
  }
  if (grad) {
    const std::vector<double> g = backward(p, s.graph, fwd.tape, d_pred);
    if (grad->size() != g.size()) grad->assign(g.size(), 0.0);
    for (std::size_t k = 0; k < g.size(); ++k) (*grad)[k] += g[k];
  }
  return loss;
}

LossAndGrad loss_and_grad(const ModelParams& p, std::span<const TrainingSample* const> batch, LossMode mode,
                          unsigned threads) {
  LossAndGrad out;
  out.grad.assign(p.values.size(), 0.0);
  if (batch.empty()) return out;
  std::vector<double> losses(batch.size());
  std::vector<std::vector<double>> grads(batch.size(), std::vector<double>(p.values.size(), 0.0));
  detail::parallel_for(batch.size(), threads,
                       [&](std::size_t i, unsigned) { losses[i] = sample_loss(p, *batch[i], mode, &grads[i]); });
  const double scale = 1.0 / static_cast<double>(batch.size());
  for (std::size_t i = 0; i < batch.size(); ++i) {
    out.loss += losses[i];
    for (std::size_t k = 0; k < out.grad.size(); ++k) out.grad[k] += grads[i][k];
  }
  out.loss *= scale;
  for (double& g : out.grad) g *= scale;
  return out;
}

void TrainConfig::validate() const {
  if (!(learning_rate >= 0.0)) throw UsageError("learning rate must be non-negative");
  if (!(weight_decay >= 0.0)) throw UsageError("weight decay must be non-negative");
  if (batch_size == 0) throw UsageError("batch size must be positive");
  if (!(beta1 >= 0.0 && beta1 < 1.0) || !(beta2 >= 0.0 && beta2 < 1.0)) {
    throw UsageError("Adam betas must lie in [0, 1)");
  }
  if (!(epsilon > 0.0)) throw UsageError("Adam epsilon must be positive");
  if (!(test_fraction >= 0.0 && test_fraction < 1.0)) throw UsageError("test fraction must lie in [0, 1)");
}

std::string TrainConfig::to_string() const {
  std::ostringstream s;
  s << "lr=" << format_real(learning_rate) << " weight_decay=" << format_real(weight_decay)
    << " batch=" << batch_size << " epochs=" << epochs << " beta1=" << format_real(beta1)
    << " beta2=" << format_real(beta2) << " eps=" << format_real(epsilon) << " seed=" << seed
    << " loss=" << gepd::to_string(loss_mode) << " test_fraction=" << format_real(test_fraction);
  return s.str();
}

void adam_step(ModelParams& p, std::span<const double> grad, AdamState& state, const TrainConfig& cfg) {
  const std::size_t n = p.values.size();
  if (grad.size() != n) throw DataError("gradient size does not match the parameters");
  if (state.m.size() != n) state.m.assign(n, 0.0);
  if (state.v.size() != n) state.v.assign(n, 0.0);
  ++state.step;
  const double t = static_cast<double>(state.step);
  const double c1 = 1.0 - std::pow(cfg.beta1, t);
  const double c2 = 1.0 - std::pow(cfg.beta2, t);
  for (std::size_t k = 0; k < n; ++k) {
    state.m[k] = cfg.beta1 * state.m[k] + (1.0 - cfg.beta1) * grad[k];
    state.v[k] = cfg.beta2 * state.v[k] + (1.0 - cfg.beta2) * grad[k] * grad[k];
    const double m_hat = state.m[k] / c1;
    const double v_hat = state.v[k] / c2;
    p.values[k] -= cfg.learning_rate * (m_hat / (std::sqrt(v_hat) + cfg.epsilon) + cfg.weight_decay * p.values[k]);
  }
}

void split_dataset(std::size_t n, double test_fraction, std::uint64_t seed, std::vector<std::size_t>& train,
                   std::vector<std::size_t>& test) {
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  Rng rng(seed);
  rng.shuffle(order);
  std::size_t n_train = static_cast<std::size_t>(std::llround(static_cast<double>(n) * (1.0 - test_fraction)));
  if (n >= 2) n_train = std::clamp<std::size_t>(n_train, 1, n - 1);
  else n_train = n;
  if (test_fraction == 0.0) n_train = n;
  train.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_train));
  test.assign(order.begin() + static_cast<std::ptrdiff_t>(n_train), order.end());
}

TrainResult train(const TrainConfig& cfg, const ModelConfig& model, std::span<const TrainingSample> dataset,
                  unsigned threads) {
  return train(cfg, init_params(model, cfg.seed), dataset, threads);
}

TrainResult train(const TrainConfig& cfg, ModelParams start, std::span<const TrainingSample> dataset,
                  unsigned threads) {
  cfg.validate();
  if (dataset.empty()) throw DataError("training dataset is empty");
  TrainResult out;
  out.params = std::move(start);
  split_dataset(dataset.size(), cfg.test_fraction, cfg.seed, out.train_indices, out.test_indices);

  auto record = [&](std::size_t epoch, double train_loss) {
    const Evaluation e = evaluate_mean(out.params, dataset, out.test_indices, threads);
    out.history.push_back({epoch, train_loss, e.w2, e.pie});
  };
  {
    std::vector<double> losses(out.train_indices.size());
    detail::parallel_for(losses.size(), threads, [&](std::size_t i, unsigned) {
      losses[i] = sample_loss(out.params, dataset[out.train_indices[i]], cfg.loss_mode, nullptr);
    });
    double total = 0.0;
    for (double l : losses) total += l;
    record(0, total / static_cast<double>(losses.size()));
  }

  Rng rng(cfg.seed ^ kShuffleStream);
  AdamState state;
  std::vector<std::size_t> order = out.train_indices;
  std::vector<const TrainingSample*> batch;
  for (std::size_t epoch = 1; epoch <= cfg.epochs; ++epoch) {
    rng.shuffle(order);
    double total = 0.0;
    for (std::size_t begin = 0; begin < order.size(); begin += cfg.batch_size) {
      const std::size_t end = std::min(order.size(), begin + cfg.batch_size);
      batch.clear();
      for (std::size_t i = begin; i < end; ++i) batch.push_back(&dataset[order[i]]);
      const LossAndGrad lg = loss_and_grad(out.params, batch, cfg.loss_mode, threads);
      total += lg.loss * static_cast<double>(batch.size());
      adam_step(out.params, lg.grad, state, cfg);
    }
    record(epoch, total / static_cast<double>(order.size()));
  }
  return out;
}

PersistenceDiagram predict_diagram(const ModelParams& p, const FilteredGraph& fg, double epsilon) {
  const std::vector<DiagramPoint> predictions = predict(p, fg);
  PersistenceDiagram d;
  d.include_zero_persistence = epsilon <= 0.0;
  for (std::size_t e = 0; e < predictions.size(); ++e) {
    const DiagramPoint pt = predictions[e];
    if (std::abs(pt.death - pt.birth) < epsilon) continue;
    const int dim = pt.death < pt.birth ? 1 : 0;
    PersistencePair pair{pt.birth, pt.death, dim, static_cast<std::uint32_t>(e), kNoSimplex};
    (dim == 0 ? d.dim0 : d.dim1).push_back(pair);
  }
  d.sort();
  return d;
}

Evaluation evaluate(const ModelParams& p, const TrainingSample& s) {
  const std::vector<DiagramPoint> pred = predict(p, s.graph);
  const std::vector<DiagramPoint> truth = diagram_points(s.truth);
  Evaluation e;
  e.w2 = wasserstein2(pred, truth).distance;
  ImageParams params;
  params.bounds = default_image_bounds(truth);
  e.pie = pie(persistence_image(pred, params), persistence_image(truth, params));
  return e;
}

Evaluation evaluate_mean(const ModelParams& p, std::span<const TrainingSample> dataset,
                         std::span<const std::size_t> indices, unsigned threads) {
  if (indices.empty()) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    return {nan, nan};
  }
  std::vector<Evaluation> parts(indices.size());
  detail::parallel_for(indices.size(), threads,
                       [&](std::size_t i, unsigned) { parts[i] = evaluate(p, dataset[indices[i]]); });
  Evaluation mean;
  for (const auto& e : parts) {
    mean.w2 += e.w2;
    mean.pie += e.pie;
  }
  mean.w2 /= static_cast<double>(parts.size());
  mean.pie /= static_cast<double>(parts.size());
  return mean;
}

void write_history(std::ostream& out, std::span<const EpochRecord> history, const std::vector<std::string>& comments) {
  for (const auto& c : comments) out << "# " << c << '\n';
  out << "# epoch train_loss test_w2 test_pie\n";
  for (const auto& r : history) {
    out << r.epoch << ' ' << format_real(r.train_loss) << ' ' << format_real(r.test_w2) << ' '
        << format_real(r.test_pie) << '\n';
  }
}

void write_history(const std::filesystem::path& path, std::span<const EpochRecord> history,
                   const std::vector<std::string>& comments) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write history file " + path.string());
  write_history(out, history, comments);
}

}  // namespace gepd
