#pragma once

#include <span>
#include <vector>

namespace gepd {

/// Exact discrete optimal transport between two finite measures of equal
/// total mass. Solved as min-cost flow by successive shortest paths with
/// Bellman-Ford on the residual bipartite network; sizes here are the
/// neighborhoods of two adjacent vertices, so no heap or potentials.
///
/// cost is row-major, supply.size() x demand.size().
struct TransportPlan {
  double cost = 0.0;
  std::vector<double> flow;  // row-major, same shape as cost
};

TransportPlan solve_transport(std::span<const double> supply, std::span<const double> demand,
                              std::span<const double> cost);

}  // namespace gepd
