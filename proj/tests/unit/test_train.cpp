#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "gepd/diagram_io.hpp"
#include "gepd/diagram_metrics.hpp"
#include "gepd/error.hpp"
#include "gepd/filtration.hpp"
#include "gepd/persistence.hpp"
#include "gepd/train.hpp"
#include "oracles.hpp"

using namespace gepd;

namespace {

ModelConfig tiny() {
  ModelConfig c;
  c.hidden_dim = 6;
  c.num_layers = 2;
  c.head_hidden = 6;
  return c;
}

std::vector<TrainingSample> small_dataset(std::size_t count, std::uint64_t seed) {
  std::vector<FilteredGraph> graphs;
  for (std::size_t i = 0; i < count; ++i) {
    Graph g = sbm_generate({10, 2, 0.5, 0.1, seed + i});
    graphs.push_back(build_filtration(g, degree_filter(g)));
  }
  return make_samples(std::move(graphs));
}

}  // namespace

TEST_CASE("samples carry the exact diagram and per-edge pairs") {
  for (const auto& s : small_dataset(5, 1)) {
    const auto map = edge_pairings(s.graph);
    REQUIRE(s.targets.size() == s.graph.graph.num_edges());
    for (EdgeId e = 0; e < s.targets.size(); ++e) {
      CHECK(s.targets[e].birth == map.entries[e].pair.birth);
      CHECK(s.targets[e].death == map.entries[e].pair.death);
    }
    const auto truth = epd_union_find(s.graph);
    CHECK(s.truth.dim0 == truth.dim0);
    CHECK(s.truth.dim1 == truth.dim1);
  }
}

TEST_CASE("loss values against their definitions") {
  const auto data = small_dataset(4, 10);
  const auto p = init_params(tiny(), 2);
  for (const auto& s : data) {
    const auto pred = predict(p, s.graph);
    double per_edge = 0.0;
    for (std::size_t e = 0; e < pred.size(); ++e) {
      per_edge += std::pow(pred[e].birth - s.targets[e].birth, 2) + std::pow(pred[e].death - s.targets[e].death, 2);
    }
    CHECK(sample_loss(p, s, LossMode::per_edge, nullptr) == doctest::Approx(per_edge).epsilon(1e-12));
    if (pred.size() <= 8) {
      CHECK(sample_loss(p, s, LossMode::forced_matching, nullptr) ==
            doctest::Approx(oracle::forced_brute_force(pred, s.targets)).epsilon(1e-12));
    }
    CHECK(sample_loss(p, s, LossMode::forced_matching, nullptr) <=
          sample_loss(p, s, LossMode::per_edge, nullptr) + 1e-12);
  }
}

TEST_CASE("a sample whose targets are the predictions has zero loss and gradient") {
  const auto p = init_params(tiny(), 5);
  auto s = small_dataset(1, 3).front();
  s.targets = predict(p, s.graph);
  for (LossMode mode : {LossMode::forced_matching, LossMode::per_edge}) {
    std::vector<double> grad;
    CHECK(sample_loss(p, s, mode, &grad) == doctest::Approx(0.0).scale(1e-20));
    // predict() and the taped forward pass may differ in the last bit.
    for (double g : grad) CHECK(std::abs(g) < 1e-12);
  }
  s.targets.pop_back();
  CHECK_THROWS_AS(sample_loss(p, s, LossMode::per_edge, nullptr), DataError);
}

TEST_CASE("batch loss is the mean and duplicating the batch changes nothing") {
  const auto data = small_dataset(3, 20);
  const auto p = init_params(tiny(), 1);
  std::vector<const TrainingSample*> batch{&data[0], &data[1], &data[2]};
  std::vector<const TrainingSample*> doubled{&data[0], &data[1], &data[2], &data[0], &data[1], &data[2]};
  const auto a = loss_and_grad(p, batch, LossMode::forced_matching);
  const auto b = loss_and_grad(p, doubled, LossMode::forced_matching, 3);
  double mean = 0.0;
  for (const auto* s : batch) mean += sample_loss(p, *s, LossMode::forced_matching, nullptr) / 3.0;
  CHECK(a.loss == doctest::Approx(mean).epsilon(1e-12));
  CHECK(b.loss == doctest::Approx(a.loss).epsilon(1e-12));
  for (std::size_t k = 0; k < a.grad.size(); ++k) CHECK(b.grad[k] == doctest::Approx(a.grad[k]).epsilon(1e-10).scale(1e-12));
}

TEST_CASE("adam step by hand") {
  TrainConfig cfg;
  cfg.learning_rate = 0.1;
  cfg.weight_decay = 0.0;
  ModelParams p;
  p.values = {1.0, -2.0};
  AdamState st;
  const std::vector<double> g{0.5, -4.0};
  adam_step(p, g, st, cfg);
  // First step: m_hat = g and v_hat = g^2, so the update is lr * g / (|g| + eps).
  CHECK(p.values[0] == doctest::Approx(1.0 - 0.1 * 0.5 / (0.5 + 1e-8)).epsilon(1e-15));
  CHECK(p.values[1] == doctest::Approx(-2.0 + 0.1 * 4.0 / (4.0 + 1e-8)).epsilon(1e-15));
  // Second step with the same gradient: m = g(1 - b1^2), v = g^2(1 - b2^2).
  adam_step(p, g, st, cfg);
  CHECK(st.step == 2);
  CHECK(p.values[0] == doctest::Approx(1.0 - 0.2).epsilon(1e-7));

  TrainConfig decay;
  decay.learning_rate = 0.01;
  decay.weight_decay = 0.5;
  ModelParams q;
  q.values = {3.0};
  AdamState st2;
  adam_step(q, std::vector<double>{0.0}, st2, decay);
  CHECK(q.values[0] == doctest::Approx(3.0 * (1.0 - 0.01 * 0.5)).epsilon(1e-15));
  CHECK_THROWS_AS(adam_step(q, std::vector<double>{0.0, 1.0}, st2, decay), DataError);
}

TEST_CASE("dataset split") {
  for (std::size_t n : {2, 3, 10, 57}) {
    std::vector<std::size_t> tr, te;
    split_dataset(n, 0.2, 9, tr, te);
    CHECK(!tr.empty());
    CHECK(!te.empty());
    CHECK(tr.size() + te.size() == n);
    std::set<std::size_t> all(tr.begin(), tr.end());
    all.insert(te.begin(), te.end());
    CHECK(all.size() == n);
    std::vector<std::size_t> tr2, te2;
    split_dataset(n, 0.2, 9, tr2, te2);
    CHECK(tr == tr2);
  }
  std::vector<std::size_t> tr, te;
  split_dataset(10, 0.2, 1, tr, te);
  CHECK(tr.size() == 8);
  split_dataset(10, 0.0, 1, tr, te);
  CHECK(te.empty());
}

TEST_CASE("training is deterministic and records history") {
  const auto data = small_dataset(12, 40);
  TrainConfig cfg;
  cfg.epochs = 3;
  cfg.batch_size = 4;
  cfg.seed = 6;
  const auto a = train(cfg, tiny(), data);
  const auto b = train(cfg, tiny(), data, 3);
  CHECK(a.params.values == b.params.values);
  REQUIRE(a.history.size() == 4);
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(a.history[i].epoch == i);
    CHECK(a.history[i].train_loss == b.history[i].train_loss);
    CHECK(a.history[i].test_w2 == b.history[i].test_w2);
    CHECK(std::isfinite(a.history[i].test_pie));
  }
  const auto init = init_params(tiny(), 6);
  const auto e0 = evaluate_mean(init, data, a.test_indices);
  CHECK(a.history[0].test_w2 == doctest::Approx(e0.w2).epsilon(1e-12));
  CHECK(a.train_indices.size() + a.test_indices.size() == data.size());

  cfg.learning_rate = 0.0;
  CHECK(train(cfg, tiny(), data).params.values == init.values);

  cfg.batch_size = 0;
  CHECK_THROWS_AS(train(cfg, tiny(), data), UsageError);

  std::ostringstream out;
  write_history(out, a.history);
  const std::string text = out.str();
  CHECK(text.find("# epoch train_loss test_w2 test_pie\n") != std::string::npos);
  CHECK(std::count(text.begin(), text.end(), '\n') == 5);
}

TEST_CASE("training lowers the loss on a fixed family") {
  const auto data = small_dataset(30, 70);
  TrainConfig cfg;
  cfg.epochs = 15;
  cfg.learning_rate = 0.01;
  cfg.seed = 1;
  const auto r = train(cfg, tiny(), data);
  CHECK(r.history.back().train_loss < 0.5 * r.history.front().train_loss);
}

TEST_CASE("predicted diagrams") {
  const auto s = small_dataset(1, 99).front();
  const auto p = init_params(tiny(), 4);
  const auto all = predict_diagram(p, s.graph, 0.0);
  CHECK(all.size() == s.graph.graph.num_edges());
  CHECK(all.include_zero_persistence);
  for (const auto& x : all.dim1) CHECK(x.death < x.birth);
  for (const auto& x : all.dim0) CHECK(x.death >= x.birth);
  for (const auto& x : all.dim0) CHECK(x.destroyer == kNoSimplex);
  const auto none = predict_diagram(p, s.graph, 1e300);
  CHECK(none.size() == 0);
  CHECK(!none.include_zero_persistence);

  const auto ev = evaluate(p, s);
  CHECK(ev.w2 == doctest::Approx(wasserstein2(predict(p, s.graph), diagram_points(s.truth)).distance));
  CHECK(std::isnan(evaluate_mean(p, std::span(&s, 1), {}).w2));
}

TEST_CASE("loss mode names") {
  CHECK(parse_loss_mode(to_string(LossMode::per_edge)) == LossMode::per_edge);
  CHECK(parse_loss_mode("forced-matching") == LossMode::forced_matching);
  CHECK_THROWS_AS(parse_loss_mode("hinge"), UsageError);
}
