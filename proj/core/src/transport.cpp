#include "gepd/transport.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gepd/error.hpp"

namespace gepd {

TransportPlan solve_transport(std::span<const double> supply, std::span<const double> demand,
                              std::span<const double> cost) {
  const std::size_t n1 = supply.size();
  const std::size_t n2 = demand.size();
  if (cost.size() != n1 * n2) throw InvariantViolation("transport cost matrix has the wrong shape");

  double total = 0.0;
  for (double s : supply) total += s;
  const double eps = 1e-14 * std::max(1.0, total);

  std::vector<double> rem_supply(supply.begin(), supply.end());
  std::vector<double> rem_demand(demand.begin(), demand.end());
  TransportPlan plan;
  plan.flow.assign(n1 * n2, 0.0);

  constexpr double kInf = std::numeric_limits<double>::infinity();
  // Nodes 0..n1-1 are supply rows, n1..n1+n2-1 demand columns.
  const std::size_t n = n1 + n2;
  std::vector<double> dist(n);
  std::vector<std::ptrdiff_t> pred(n);

  while (true) {
    std::fill(dist.begin(), dist.end(), kInf);
    std::fill(pred.begin(), pred.end(), -1);
    for (std::size_t i = 0; i < n1; ++i) {
      if (rem_supply[i] > eps) dist[i] = 0.0;
    }
    // Bellman-Ford; the residual network has no negative cycles.
    for (std::size_t round = 0; round < n; ++round) {
      bool changed = false;
      for (std::size_t i = 0; i < n1; ++i) {
        for (std::size_t j = 0; j < n2; ++j) {
          double c = cost[i * n2 + j];
          if (dist[i] < kInf && dist[i] + c < dist[n1 + j] - 1e-15) {
            dist[n1 + j] = dist[i] + c;
            pred[n1 + j] = static_cast<std::ptrdiff_t>(i);
            changed = true;
          }
          if (plan.flow[i * n2 + j] > eps && dist[n1 + j] < kInf && dist[n1 + j] - c < dist[i] - 1e-15) {
            dist[i] = dist[n1 + j] - c;
            pred[i] = static_cast<std::ptrdiff_t>(n1 + j);
            changed = true;
          }
        }
      }
      if (!changed) break;
    }

    std::ptrdiff_t sink_col = -1;
    double best = kInf;
    for (std::size_t j = 0; j < n2; ++j) {
      if (rem_demand[j] > eps && dist[n1 + j] < best) {
        best = dist[n1 + j];
        sink_col = static_cast<std::ptrdiff_t>(j);
      }
    }
    if (sink_col < 0) break;

    // Walk back to a source row collecting the bottleneck.
    double push = rem_demand[static_cast<std::size_t>(sink_col)];
    std::size_t node = n1 + static_cast<std::size_t>(sink_col);
    while (true) {
      if (node >= n1) {
        auto i = static_cast<std::size_t>(pred[node]);
        node = i;
      } else {
        if (pred[node] < 0) break;
        auto col = static_cast<std::size_t>(pred[node]) - n1;
        push = std::min(push, plan.flow[node * n2 + col]);
        node = static_cast<std::size_t>(pred[node]);
      }
    }
    std::size_t source_row = node;
    push = std::min(push, rem_supply[source_row]);

    node = n1 + static_cast<std::size_t>(sink_col);
    while (true) {
      if (node >= n1) {
        auto i = static_cast<std::size_t>(pred[node]);
        plan.flow[i * n2 + (node - n1)] += push;
        node = i;
      } else {
        if (pred[node] < 0) break;
        auto col = static_cast<std::size_t>(pred[node]) - n1;
        plan.flow[node * n2 + col] -= push;
        node = static_cast<std::size_t>(pred[node]);
      }
    }
    rem_supply[source_row] -= push;
    rem_demand[static_cast<std::size_t>(sink_col)] -= push;
  }

  for (double r : rem_demand) {
    if (r > 1e-9 * std::max(1.0, total)) throw InvariantViolation("transport left unmet demand");
  }
  for (std::size_t k = 0; k < plan.flow.size(); ++k) plan.cost += plan.flow[k] * cost[k];
  return plan;
}

}  // namespace gepd
