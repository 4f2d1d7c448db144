#pragma once

// Finite-difference checking of the PDGNN gradient.
//
// The loss is only piecewise smooth: PReLU, the elementwise min, the leaky
// attention score and the matching all switch branches at kinks. A central
// difference whose +-h probe lands on the other side of a kink measures a
// mixture of two derivatives, so a sample is only usable when the discrete
// activation pattern is identical at p + h e_k and p - h e_k for every k.

#include <cstdint>
#include <vector>

#include "gepd/pdgnn.hpp"
#include "gepd/train.hpp"

namespace gepd::gradcheck {

/// Every discrete branch the loss depends on: signs of each PReLU and leaky
/// input, min argmins, and (forced matching only) the matched target of each
/// prediction.
std::vector<std::int32_t> activation_pattern(const ModelParams& p, const TrainingSample& s, LossMode mode);

/// The fixed generator for candidate samples: Rng(seed), every vertex pair
/// joined with probability 0.35, filter values uniform in [0, 3).
TrainingSample random_sample(std::size_t vertices, std::uint64_t seed);

struct Tolerance {
  double relative = 1e-4;
  double absolute = 1e-6;
  bool accepts(double analytic, double numeric) const;
};

struct FdReport {
  std::size_t checked = 0;
  std::size_t failures = 0;
  double max_abs_error = 0.0;
  double worst_relative = 0.0;  // over entries above the absolute floor
  double max_gradient = 0.0;
};

/// Central differences for every parameter against the analytic gradient.
FdReport finite_difference_check(const ModelParams& p, const TrainingSample& s, LossMode mode, double h,
                                 const Tolerance& tol);

/// Number of parameters whose +-h probe changes the activation pattern.
std::size_t straddle_count(const ModelParams& p, const TrainingSample& s, LossMode mode, double h,
                           bool stop_at_first = false);

struct StableChoice {
  std::uint64_t seed = 0;
  std::size_t scanned = 0;
  std::vector<std::size_t> straddles;  // per rejected seed, in scan order
  TrainingSample sample;
  ModelParams params;
};

/// Scans seeds first_seed, first_seed + 1, ... and returns the first sample
/// (with parameters init_params(cfg, seed)) whose pattern is stable under
/// every +-h probe. Never looks at gradients. Throws after max_scan seeds.
StableChoice find_stable_sample(const ModelConfig& cfg, std::size_t vertices, LossMode mode, double h,
                                std::uint64_t first_seed, std::size_t max_scan);

}  // namespace gepd::gradcheck
