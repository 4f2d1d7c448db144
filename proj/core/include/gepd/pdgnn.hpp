#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "gepd/diagram_metrics.hpp"
#include "gepd/filtration.hpp"

namespace gepd {

/// Architecture switches. The defaults are the full model; turning
/// min_aggregation / edge_messages / attention off gives the ablations.
struct ModelConfig {
  std::size_t input_dim = 1;
  std::size_t hidden_dim = 32;
  std::size_t num_layers = 4;
  std::size_t head_hidden = 32;
  bool min_aggregation = true;  // AGG = SUM ⊕ MIN (else SUM)
  bool edge_messages = true;    // message reads [h_u ⊕ h_v] (else h_v)
  bool attention = true;        // attention edge weights (else weight 1)
  bool symmetric_head = false;  // head averages both endpoint orders

  friend bool operator==(const ModelConfig&, const ModelConfig&) = default;
  std::string to_string() const;
};

/// Offsets into the flat parameter vector. Matrices are row-major with
/// shape (inputs x outputs). Per layer, in this order:
///   attention transform (d_in x d)   [attention only]
///   attention vector    (2d)         [attention only]
///   message weight      (m_in x d), m_in = 2 d_in with edge messages, else d_in
///   message bias        (d)
///   PReLU slope         (1)
///   combine weight      (c_in x d), c_in = d (+ d with min) + d_in
///   combine bias        (d)
/// then the head:
///   hidden weight (2d x h), hidden bias (h), PReLU slope (1),
///   output weight (h x 2), output bias (2).
struct LayerLayout {
  std::size_t in_dim = 0;
  std::size_t out_dim = 0;
  std::size_t message_in = 0;
  std::size_t combine_in = 0;
  std::size_t att_transform = 0;
  std::size_t att_vector = 0;
  std::size_t msg_weight = 0;
  std::size_t msg_bias = 0;
  std::size_t slope = 0;
  std::size_t combine_weight = 0;
  std::size_t combine_bias = 0;
};

struct ModelLayout {
  std::vector<LayerLayout> layers;
  std::size_t head_w1 = 0;
  std::size_t head_b1 = 0;
  std::size_t head_slope = 0;
  std::size_t head_w2 = 0;
  std::size_t head_b2 = 0;
  std::size_t total = 0;
};

ModelLayout layout_of(const ModelConfig& cfg);

struct ModelParams {
  ModelConfig config;
  std::vector<double> values;  // flat, in layout_of(config) order
};

/// Uniform(-1/sqrt(fan_in), 1/sqrt(fan_in)) for weights and biases, drawn
/// in flat order from Rng(seed); PReLU slopes start at 0.25.
ModelParams init_params(const ModelConfig& cfg, std::uint64_t seed);

inline constexpr double kAttentionLeak = 0.2;

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Intermediate values kept for the backward pass. A "slot" is a directed
/// edge u <- v; slots of u are contiguous and ordered by neighbor id.
struct LayerTape {
  RowMatrix input;      // n x d_in
  RowMatrix att_proj;   // n x d
  std::vector<double> att_score;  // per slot, before the leaky ReLU
  std::vector<double> alpha;      // per slot
  RowMatrix pre_message;   // slots x d, before attention scaling
  RowMatrix scaled;        // slots x d, alpha * pre_message
  RowMatrix message;       // slots x d, after PReLU
  std::vector<std::uint32_t> argmin;  // n x d slot index per min channel
  RowMatrix combined;   // n x c_in
  RowMatrix pre_out;    // n x d
};

struct ForwardTape {
  std::vector<std::size_t> slot_offset;  // n + 1
  std::vector<VertexId> slot_source;     // neighbor v of each slot
  std::vector<LayerTape> layers;
  RowMatrix embedding;  // n x d, final node features
  RowMatrix head_pre;   // m x h (or 2m x h with a symmetric head)
  RowMatrix head_act;
};

struct ForwardResult {
  std::vector<DiagramPoint> predictions;  // one per edge id
  ForwardTape tape;
};

/// Runs the network on h0 = vertex filter values; predicts one
/// (birth, death) per edge from [h_u ⊕ h_v] with u < v.
ForwardResult forward(const ModelParams& p, const FilteredGraph& fg);

/// Predictions of forward() without keeping the tape.
std::vector<DiagramPoint> predict(const ModelParams& p, const FilteredGraph& fg);

/// Gradient of sum_e <grad_pred[e], prediction[e]> with respect to every
/// parameter, in flat order.
std::vector<double> backward(const ModelParams& p, const FilteredGraph& fg, const ForwardTape& tape,
                             std::span<const DiagramPoint> grad_pred);

}  // namespace gepd
