#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "gepd/pdgnn.hpp"

namespace gepd {

/// forced_matching: optimal bijection between predicted and target points,
/// recomputed every step and held fixed for the gradient.
/// per_edge: prediction of edge e is compared with the pair of edge e.
enum class LossMode { forced_matching, per_edge };

std::string to_string(LossMode mode);
/// Throws UsageError on an unknown name.
LossMode parse_loss_mode(const std::string& name);

struct TrainingSample {
  FilteredGraph graph;
  std::vector<DiagramPoint> targets;  // one per edge id
  PersistenceDiagram truth;           // zero persistence included
};

/// Exact diagram and per-edge targets of fg.
TrainingSample make_sample(FilteredGraph fg);
std::vector<TrainingSample> make_samples(std::vector<FilteredGraph> graphs, unsigned threads = 1);

struct LossAndGrad {
  double loss = 0.0;
  std::vector<double> grad;
};

/// Loss of one sample and, when grad is non-null, its gradient added into
/// *grad. Throws DataError when the target count differs from |E|.
double sample_loss(const ModelParams& p, const TrainingSample& s, LossMode mode, std::vector<double>* grad);

/// Mean loss over the batch and its gradient. Samples may be evaluated
/// concurrently; gradients are summed in batch order.
LossAndGrad loss_and_grad(const ModelParams& p, std::span<const TrainingSample* const> batch, LossMode mode,
                          unsigned threads = 1);

struct TrainConfig {
  double learning_rate = 0.002;
  double weight_decay = 0.01;
  std::size_t batch_size = 10;
  std::size_t epochs = 20;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  std::uint64_t seed = 0;
  LossMode loss_mode = LossMode::forced_matching;
  double test_fraction = 0.2;

  /// Throws UsageError on a non-positive rate or size.
  void validate() const;
  std::string to_string() const;
};

struct AdamState {
  std::vector<double> m;
  std::vector<double> v;
  std::uint64_t step = 0;
};

/// Bias-corrected Adam with decoupled weight decay:
///   p <- p - lr * (m_hat / (sqrt(v_hat) + eps) + wd * p)
void adam_step(ModelParams& p, std::span<const double> grad, AdamState& state, const TrainConfig& cfg);

struct EpochRecord {
  std::size_t epoch = 0;  // 0 = before any update
  double train_loss = 0.0;
  double test_w2 = 0.0;
  double test_pie = 0.0;
};

struct TrainResult {
  ModelParams params;
  std::vector<EpochRecord> history;
  std::vector<std::size_t> train_indices;
  std::vector<std::size_t> test_indices;
};

/// Seeded split of [0, n): the first round(n * (1 - test_fraction)) of a
/// shuffle train, the rest test. Both sides are nonempty when n >= 2.
void split_dataset(std::size_t n, double test_fraction, std::uint64_t seed, std::vector<std::size_t>& train,
                   std::vector<std::size_t>& test);

/// Starts from init_params(model, cfg.seed) and runs cfg.epochs of shuffled
/// mini-batch Adam. Test metrics are NaN when the test side is empty.
TrainResult train(const TrainConfig& cfg, const ModelConfig& model, std::span<const TrainingSample> dataset,
                  unsigned threads = 1);
/// Same, from given starting parameters.
TrainResult train(const TrainConfig& cfg, ModelParams start, std::span<const TrainingSample> dataset,
                  unsigned threads = 1);

/// Predicted points as a diagram: a point with death < birth is dim 1,
/// otherwise dim 0; creator is the edge id. Points with
/// |death - birth| < epsilon are left out.
PersistenceDiagram predict_diagram(const ModelParams& p, const FilteredGraph& fg, double epsilon = 0.0);

struct Evaluation {
  double w2 = 0.0;
  double pie = 0.0;
};

/// W2 between the |E| predicted points and the exact diagram, and the PIE
/// between their images over the bounds the exact diagram defaults to.
Evaluation evaluate(const ModelParams& p, const TrainingSample& s);
/// Means over the selected samples; NaN when indices is empty.
Evaluation evaluate_mean(const ModelParams& p, std::span<const TrainingSample> dataset,
                         std::span<const std::size_t> indices, unsigned threads = 1);

/// "epoch train_loss test_w2 test_pie", one record per line.
void write_history(std::ostream& out, std::span<const EpochRecord> history,
                   const std::vector<std::string>& comments = {});
void write_history(const std::filesystem::path& path, std::span<const EpochRecord> history,
                   const std::vector<std::string>& comments = {});

}  // namespace gepd
