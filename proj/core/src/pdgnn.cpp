#include "gepd/pdgnn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "gepd/error.hpp"
#include "gepd/rng.hpp"

namespace gepd {
namespace {

using ConstMap = Eigen::Map<const RowMatrix>;
using MutMap = Eigen::Map<RowMatrix>;

constexpr std::uint32_t kNoSlot = std::numeric_limits<std::uint32_t>::max();

ConstMap param_block(const std::vector<double>& v, std::size_t offset, std::size_t rows, std::size_t cols) {
  return ConstMap(v.data() + offset, static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
}
MutMap grad_block(std::vector<double>& v, std::size_t offset, std::size_t rows, std::size_t cols) {
  return MutMap(v.data() + offset, static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
}

double prelu(double x, double slope) { return x > 0.0 ? x : slope * x; }
double prelu_dx(double x, double slope) { return x > 0.0 ? 1.0 : slope; }
double negative_part(double x) { return x > 0.0 ? 0.0 : x; }

RowMatrix apply_prelu(const RowMatrix& x, double slope) {
  return x.unaryExpr([slope](double v) { return prelu(v, slope); });
}

// Pushes upstream gradient through a PReLU; accumulates the slope gradient.
RowMatrix prelu_backward(const RowMatrix& upstream, const RowMatrix& pre, double slope, double& slope_grad) {
  RowMatrix out(pre.rows(), pre.cols());
  for (Eigen::Index i = 0; i < pre.size(); ++i) {
    const double x = pre.data()[i];
    out.data()[i] = upstream.data()[i] * prelu_dx(x, slope);
    slope_grad += upstream.data()[i] * negative_part(x);
  }
  return out;
}

}  // namespace

std::string ModelConfig::to_string() const {
  std::ostringstream s;
  s << "input=" << input_dim << " hidden=" << hidden_dim << " layers=" << num_layers << " head=" << head_hidden
    << " min=" << min_aggregation << " edge_messages=" << edge_messages << " attention=" << attention
    << " symmetric_head=" << symmetric_head;
  return s.str();
}

ModelLayout layout_of(const ModelConfig& cfg) {
  if (cfg.input_dim == 0 || cfg.hidden_dim == 0 || cfg.num_layers == 0 || cfg.head_hidden == 0) {
    throw DataError("model dimensions must be positive");
  }
  ModelLayout out;
  std::size_t off = 0;
  std::size_t d_in = cfg.input_dim;
  const std::size_t d = cfg.hidden_dim;
  for (std::size_t l = 0; l < cfg.num_layers; ++l) {
    LayerLayout L;
    L.in_dim = d_in;
    L.out_dim = d;
    L.message_in = cfg.edge_messages ? 2 * d_in : d_in;
    L.combine_in = d + (cfg.min_aggregation ? d : 0) + d_in;
    if (cfg.attention) {
      L.att_transform = off;
      off += d_in * d;
      L.att_vector = off;
      off += 2 * d;
    }
    L.msg_weight = off;
    off += L.message_in * d;
    L.msg_bias = off;
    off += d;
    L.slope = off;
    off += 1;
    L.combine_weight = off;
    off += L.combine_in * d;
    L.combine_bias = off;
    off += d;
    out.layers.push_back(L);
    d_in = d;
  }
  const std::size_t h = cfg.head_hidden;
  out.head_w1 = off;
  off += 2 * d * h;
  out.head_b1 = off;
  off += h;
  out.head_slope = off;
  off += 1;
  out.head_w2 = off;
  off += h * 2;
  out.head_b2 = off;
  off += 2;
  out.total = off;
  return out;
}

ModelParams init_params(const ModelConfig& cfg, std::uint64_t seed) {
  const ModelLayout L = layout_of(cfg);
  ModelParams p{cfg, std::vector<double>(L.total, 0.0)};
  Rng rng(seed);
  std::size_t cursor = 0;
  auto fill = [&](std::size_t count, std::size_t fan_in) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
    for (std::size_t i = 0; i < count; ++i) p.values[cursor++] = rng.uniform(-bound, bound);
  };
  auto slope = [&] { p.values[cursor++] = 0.25; };
  const std::size_t d = cfg.hidden_dim;
  for (const auto& layer : L.layers) {
    if (cfg.attention) {
      fill(layer.in_dim * d, layer.in_dim);
      fill(2 * d, 2 * d);
    }
    fill(layer.message_in * d, layer.message_in);
    fill(d, layer.message_in);
    slope();
    fill(layer.combine_in * d, layer.combine_in);
    fill(d, layer.combine_in);
  }
  fill(2 * d * cfg.head_hidden, 2 * d);
  fill(cfg.head_hidden, 2 * d);
  slope();
  fill(cfg.head_hidden * 2, cfg.head_hidden);
  fill(2, cfg.head_hidden);
  if (cursor != L.total) throw InvariantViolation("parameter initialization does not cover the layout");
  return p;
}

namespace {

// Runs the network; intermediate values are kept in *tape when it is
// non-null. Without a tape the min channels skip argmin bookkeeping.
std::vector<DiagramPoint> run_network(const ModelParams& p, const FilteredGraph& fg, ForwardTape* keep) {
  const ModelConfig& cfg = p.config;
  const ModelLayout L = layout_of(cfg);
  if (p.values.size() != L.total) throw DataError("parameter vector does not match the model configuration");
  if (cfg.input_dim != 1) throw DataError("the input feature is the scalar filter value; input_dim must be 1");

  const Graph& g = fg.graph;
  const std::size_t n = g.num_vertices();
  const std::size_t m = g.num_edges();
  const std::size_t d = cfg.hidden_dim;
  const auto di = [](std::size_t x) { return static_cast<Eigen::Index>(x); };

  ForwardTape scratch;
  ForwardTape& tape = keep ? *keep : scratch;
  tape.slot_offset.assign(n + 1, 0);
  for (VertexId u = 0; u < n; ++u) tape.slot_offset[u + 1] = tape.slot_offset[u] + g.degree(u);
  tape.slot_source.reserve(2 * m);
  for (VertexId u = 0; u < n; ++u) {
    for (const auto& inc : g.incident(u)) tape.slot_source.push_back(inc.neighbor);
  }
  const std::size_t slots = tape.slot_source.size();

  RowMatrix h(di(n), 1);
  for (VertexId v = 0; v < n; ++v) h(v, 0) = fg.vertex_values[v];

  for (const auto& layer : L.layers) {
    LayerTape t;
    const double slope = p.values[layer.slope];
    if (keep) t.input = h;

    t.alpha.assign(slots, 1.0);
    if (cfg.attention) {
      auto w_att = param_block(p.values, layer.att_transform, layer.in_dim, d);
      auto a_src = param_block(p.values, layer.att_vector, 1, d);
      auto a_dst = param_block(p.values, layer.att_vector + d, 1, d);
      t.att_proj = h * w_att;
      Eigen::VectorXd src = t.att_proj * a_src.transpose();
      Eigen::VectorXd dst = t.att_proj * a_dst.transpose();
      t.att_score.resize(slots);
      for (VertexId u = 0; u < n; ++u) {
        const std::size_t b = tape.slot_offset[u];
        const std::size_t e = tape.slot_offset[u + 1];
        if (b == e) continue;
        double peak = -std::numeric_limits<double>::infinity();
        for (std::size_t k = b; k < e; ++k) {
          const double s = src(u) + dst(tape.slot_source[k]);
          t.att_score[k] = s;
          t.alpha[k] = s > 0.0 ? s : kAttentionLeak * s;
          peak = std::max(peak, t.alpha[k]);
        }
        double total = 0.0;
        for (std::size_t k = b; k < e; ++k) {
          t.alpha[k] = std::exp(t.alpha[k] - peak);
          total += t.alpha[k];
        }
        for (std::size_t k = b; k < e; ++k) t.alpha[k] /= total;
      }
    }

    auto w_msg = param_block(p.values, layer.msg_weight, layer.message_in, d);
    auto b_msg = param_block(p.values, layer.msg_bias, 1, d);
    RowMatrix from_target;
    RowMatrix from_source;
    if (cfg.edge_messages) {
      from_target = h * w_msg.topRows(di(layer.in_dim));
      from_source = h * w_msg.bottomRows(di(layer.in_dim));
    } else {
      from_source = h * w_msg;
    }
    RowMatrix sum = RowMatrix::Zero(di(n), di(d));
    RowMatrix mins = RowMatrix::Zero(di(n), di(d));
    if (keep) {
      t.pre_message.resize(di(slots), di(d));
      for (VertexId u = 0; u < n; ++u) {
        for (std::size_t k = tape.slot_offset[u]; k < tape.slot_offset[u + 1]; ++k) {
          auto row = t.pre_message.row(di(k));
          row = from_source.row(tape.slot_source[k]) + b_msg;
          if (cfg.edge_messages) row += from_target.row(u);
        }
      }
      t.scaled = t.pre_message;
      for (std::size_t k = 0; k < slots; ++k) t.scaled.row(di(k)) *= t.alpha[k];
      t.message = apply_prelu(t.scaled, slope);
      t.argmin.assign(n * d, kNoSlot);
      for (VertexId u = 0; u < n; ++u) {
        for (std::size_t k = tape.slot_offset[u]; k < tape.slot_offset[u + 1]; ++k) {
          sum.row(u) += t.message.row(di(k));
          if (!cfg.min_aggregation) continue;
          for (std::size_t c = 0; c < d; ++c) {
            const double v = t.message(di(k), di(c));
            std::uint32_t& best = t.argmin[u * d + c];
            if (best == kNoSlot || v < mins(u, di(c))) {
              mins(u, di(c)) = v;
              best = static_cast<std::uint32_t>(k);
            }
          }
        }
      }
    } else {
      // Same values in one pass per slot, nothing stored per slot.
      std::vector<double> base(d);
      for (VertexId u = 0; u < n; ++u) {
        const std::size_t b = tape.slot_offset[u];
        const std::size_t e = tape.slot_offset[u + 1];
        for (std::size_t c = 0; c < d; ++c) {
          base[c] = b_msg(0, di(c)) + (cfg.edge_messages ? from_target(u, di(c)) : 0.0);
        }
        double* acc = sum.data() + u * d;
        double* low = mins.data() + u * d;
        if (b == e) continue;
        std::fill(low, low + d, std::numeric_limits<double>::infinity());
        for (std::size_t k = b; k < e; ++k) {
          const double* src = from_source.data() + tape.slot_source[k] * d;
          const double a = t.alpha[k];
          for (std::size_t c = 0; c < d; ++c) {
            const double z = a * (src[c] + base[c]);
            const double msg = std::max(z, 0.0) + slope * std::min(z, 0.0);
            acc[c] += msg;
            low[c] = std::min(low[c], msg);
          }
        }
        if (!cfg.min_aggregation) std::fill(low, low + d, 0.0);
      }
    }

    t.combined.resize(di(n), di(layer.combine_in));
    t.combined.leftCols(di(d)) = sum;
    if (cfg.min_aggregation) t.combined.middleCols(di(d), di(d)) = mins;
    t.combined.rightCols(di(layer.in_dim)) = h;
    auto w_comb = param_block(p.values, layer.combine_weight, layer.combine_in, d);
    auto b_comb = param_block(p.values, layer.combine_bias, 1, d);
    t.pre_out = t.combined * w_comb;
    t.pre_out.rowwise() += b_comb.row(0);
    h = apply_prelu(t.pre_out, slope);
    if (keep) tape.layers.push_back(std::move(t));
  }
  if (keep) tape.embedding = h;

  const std::size_t hh = cfg.head_hidden;
  auto w1 = param_block(p.values, L.head_w1, 2 * d, hh);
  auto b1 = param_block(p.values, L.head_b1, 1, hh);
  auto w2 = param_block(p.values, L.head_w2, hh, 2);
  auto b2 = param_block(p.values, L.head_b2, 1, 2);
  const double head_slope = p.values[L.head_slope];
  RowMatrix first = h * w1.topRows(di(d));
  RowMatrix second = h * w1.bottomRows(di(d));
  std::vector<DiagramPoint> predictions(m);
  if (!keep) {
    std::vector<double> q(hh);
    auto eval = [&](VertexId x, VertexId y, double& o0, double& o1) {
      const double* fx = first.data() + x * hh;
      const double* sy = second.data() + y * hh;
      for (std::size_t j = 0; j < hh; ++j) {
        const double z = fx[j] + sy[j] + b1(0, di(j));
        q[j] = std::max(z, 0.0) + head_slope * std::min(z, 0.0);
      }
      for (std::size_t j = 0; j < hh; ++j) {
        o0 += q[j] * w2(di(j), 0);
        o1 += q[j] * w2(di(j), 1);
      }
    };
    for (EdgeId e = 0; e < m; ++e) {
      const Edge& ed = g.edge(e);
      double o0 = 0.0;
      double o1 = 0.0;
      eval(ed.u, ed.v, o0, o1);
      if (cfg.symmetric_head) {
        eval(ed.v, ed.u, o0, o1);
        o0 *= 0.5;
        o1 *= 0.5;
      }
      predictions[e] = {o0 + b2(0, 0), o1 + b2(0, 1)};
    }
    return predictions;
  }
  const std::size_t rows = cfg.symmetric_head ? 2 * m : m;
  tape.head_pre.resize(di(rows), di(hh));
  for (EdgeId e = 0; e < m; ++e) {
    const Edge& ed = g.edge(e);
    tape.head_pre.row(e) = first.row(ed.u) + second.row(ed.v) + b1;
    if (cfg.symmetric_head) tape.head_pre.row(di(m + e)) = first.row(ed.v) + second.row(ed.u) + b1;
  }
  tape.head_act = apply_prelu(tape.head_pre, head_slope);
  RowMatrix hidden = cfg.symmetric_head
                         ? RowMatrix(0.5 * (tape.head_act.topRows(di(m)) + tape.head_act.bottomRows(di(m))))
                         : tape.head_act;
  RowMatrix out = hidden * w2;
  out.rowwise() += b2.row(0);
  for (EdgeId e = 0; e < m; ++e) predictions[e] = {out(e, 0), out(e, 1)};
  return predictions;
}

}  // namespace

ForwardResult forward(const ModelParams& p, const FilteredGraph& fg) {
  ForwardResult result;
  result.predictions = run_network(p, fg, &result.tape);
  return result;
}

std::vector<DiagramPoint> predict(const ModelParams& p, const FilteredGraph& fg) { return run_network(p, fg, nullptr); }

std::vector<double> backward(const ModelParams& p, const FilteredGraph& fg, const ForwardTape& tape,
                             std::span<const DiagramPoint> grad_pred) {
  const ModelConfig& cfg = p.config;
  const ModelLayout L = layout_of(cfg);
  const Graph& g = fg.graph;
  const std::size_t n = g.num_vertices();
  const std::size_t m = g.num_edges();
  const std::size_t d = cfg.hidden_dim;
  const std::size_t hh = cfg.head_hidden;
  const auto di = [](std::size_t x) { return static_cast<Eigen::Index>(x); };
  if (grad_pred.size() != m) throw DataError("prediction gradient must have one entry per edge");

  std::vector<double> grad(L.total, 0.0);

  // Head.
  RowMatrix d_out(di(m), 2);
  for (EdgeId e = 0; e < m; ++e) {
    d_out(e, 0) = grad_pred[e].birth;
    d_out(e, 1) = grad_pred[e].death;
  }
  auto w1 = param_block(p.values, L.head_w1, 2 * d, hh);
  auto w2 = param_block(p.values, L.head_w2, hh, 2);
  RowMatrix hidden = cfg.symmetric_head
                         ? RowMatrix(0.5 * (tape.head_act.topRows(di(m)) + tape.head_act.bottomRows(di(m))))
                         : tape.head_act;
  grad_block(grad, L.head_w2, hh, 2) += hidden.transpose() * d_out;
  grad_block(grad, L.head_b2, 1, 2) += d_out.colwise().sum();
  RowMatrix d_hidden = d_out * w2.transpose();
  RowMatrix d_act(tape.head_act.rows(), di(hh));
  if (cfg.symmetric_head) {
    d_act.topRows(di(m)) = 0.5 * d_hidden;
    d_act.bottomRows(di(m)) = 0.5 * d_hidden;
  } else {
    d_act = d_hidden;
  }
  RowMatrix d_head_pre = prelu_backward(d_act, tape.head_pre, p.values[L.head_slope], grad[L.head_slope]);
  RowMatrix d_first = RowMatrix::Zero(di(n), di(hh));
  RowMatrix d_second = RowMatrix::Zero(di(n), di(hh));
  for (EdgeId e = 0; e < m; ++e) {
    const Edge& ed = g.edge(e);
    d_first.row(ed.u) += d_head_pre.row(e);
    d_second.row(ed.v) += d_head_pre.row(e);
    if (cfg.symmetric_head) {
      d_first.row(ed.v) += d_head_pre.row(di(m + e));
      d_second.row(ed.u) += d_head_pre.row(di(m + e));
    }
  }
  const RowMatrix& emb = tape.embedding;
  grad_block(grad, L.head_w1, d, hh) += emb.transpose() * d_first;
  grad_block(grad, L.head_w1 + d * hh, d, hh) += emb.transpose() * d_second;
  grad_block(grad, L.head_b1, 1, hh) += d_head_pre.colwise().sum();
  RowMatrix d_h = d_first * w1.topRows(di(d)).transpose() + d_second * w1.bottomRows(di(d)).transpose();

  // Message-passing layers, last to first.
  const std::size_t slots = tape.slot_source.size();
  for (std::size_t li = L.layers.size(); li-- > 0;) {
    const LayerLayout& layer = L.layers[li];
    const LayerTape& t = tape.layers[li];
    const double slope = p.values[layer.slope];
    double& slope_grad = grad[layer.slope];

    RowMatrix d_pre_out = prelu_backward(d_h, t.pre_out, slope, slope_grad);
    auto w_comb = param_block(p.values, layer.combine_weight, layer.combine_in, d);
    grad_block(grad, layer.combine_weight, layer.combine_in, d) += t.combined.transpose() * d_pre_out;
    grad_block(grad, layer.combine_bias, 1, d) += d_pre_out.colwise().sum();
    RowMatrix d_comb = d_pre_out * w_comb.transpose();
    RowMatrix d_in = d_comb.rightCols(di(layer.in_dim));

    RowMatrix d_message(di(slots), di(d));
    for (VertexId u = 0; u < n; ++u) {
      for (std::size_t k = tape.slot_offset[u]; k < tape.slot_offset[u + 1]; ++k) {
        d_message.row(di(k)) = d_comb.row(u).leftCols(di(d));
      }
      if (!cfg.min_aggregation) continue;
      for (std::size_t c = 0; c < d; ++c) {
        const std::uint32_t k = t.argmin[u * d + c];
        if (k != kNoSlot) d_message(k, di(c)) += d_comb(u, di(d + c));
      }
    }
    RowMatrix d_scaled = prelu_backward(d_message, t.scaled, slope, slope_grad);

    std::vector<double> d_alpha(slots, 0.0);
    RowMatrix d_pre_message(di(slots), di(d));
    for (std::size_t k = 0; k < slots; ++k) {
      d_alpha[k] = d_scaled.row(di(k)).dot(t.pre_message.row(di(k)));
      d_pre_message.row(di(k)) = t.alpha[k] * d_scaled.row(di(k));
    }
    grad_block(grad, layer.msg_bias, 1, d) += d_pre_message.colwise().sum();
    RowMatrix d_from_source = RowMatrix::Zero(di(n), di(d));
    RowMatrix d_from_target = RowMatrix::Zero(di(n), di(d));
    for (VertexId u = 0; u < n; ++u) {
      for (std::size_t k = tape.slot_offset[u]; k < tape.slot_offset[u + 1]; ++k) {
        d_from_source.row(tape.slot_source[k]) += d_pre_message.row(di(k));
        if (cfg.edge_messages) d_from_target.row(u) += d_pre_message.row(di(k));
      }
    }
    auto w_msg = param_block(p.values, layer.msg_weight, layer.message_in, d);
    if (cfg.edge_messages) {
      grad_block(grad, layer.msg_weight, layer.in_dim, d) += t.input.transpose() * d_from_target;
      grad_block(grad, layer.msg_weight + layer.in_dim * d, layer.in_dim, d) += t.input.transpose() * d_from_source;
      d_in += d_from_target * w_msg.topRows(di(layer.in_dim)).transpose();
      d_in += d_from_source * w_msg.bottomRows(di(layer.in_dim)).transpose();
    } else {
      grad_block(grad, layer.msg_weight, layer.in_dim, d) += t.input.transpose() * d_from_source;
      d_in += d_from_source * w_msg.transpose();
    }

    if (cfg.attention) {
      Eigen::VectorXd d_src = Eigen::VectorXd::Zero(di(n));
      Eigen::VectorXd d_dst = Eigen::VectorXd::Zero(di(n));
      for (VertexId u = 0; u < n; ++u) {
        const std::size_t b = tape.slot_offset[u];
        const std::size_t e = tape.slot_offset[u + 1];
        double weighted = 0.0;
        for (std::size_t k = b; k < e; ++k) weighted += t.alpha[k] * d_alpha[k];
        for (std::size_t k = b; k < e; ++k) {
          const double d_logit = t.alpha[k] * (d_alpha[k] - weighted);
          const double d_score = d_logit * (t.att_score[k] > 0.0 ? 1.0 : kAttentionLeak);
          d_src(u) += d_score;
          d_dst(tape.slot_source[k]) += d_score;
        }
      }
      auto a_src = param_block(p.values, layer.att_vector, 1, d);
      auto a_dst = param_block(p.values, layer.att_vector + d, 1, d);
      grad_block(grad, layer.att_vector, 1, d) += d_src.transpose() * t.att_proj;
      grad_block(grad, layer.att_vector + d, 1, d) += d_dst.transpose() * t.att_proj;
      RowMatrix d_proj = d_src * a_src + d_dst * a_dst;
      auto w_att = param_block(p.values, layer.att_transform, layer.in_dim, d);
      grad_block(grad, layer.att_transform, layer.in_dim, d) += t.input.transpose() * d_proj;
      d_in += d_proj * w_att.transpose();
    }
    d_h = std::move(d_in);
  }
  return grad;
}

}  // namespace gepd
