#include "gepd/diagram_metrics.hpp"

#include <algorithm>
#include <cmath>

#include "gepd/assignment.hpp"
#include "gepd/error.hpp"

namespace gepd {

std::vector<DiagramPoint> diagram_points(const PersistenceDiagram& d) {
  std::vector<DiagramPoint> out;
  out.reserve(d.size());
  for (const auto& p : d.dim0) out.push_back({p.birth, p.death});
  for (const auto& p : d.dim1) out.push_back({p.birth, p.death});
  return out;
}

double point_cost(DiagramPoint a, DiagramPoint b, GroundMetric metric) {
  const double db = a.birth - b.birth;
  const double dd = a.death - b.death;
  if (metric == GroundMetric::chebyshev) {
    const double m = std::max(std::abs(db), std::abs(dd));
    return m * m;
  }
  return db * db + dd * dd;
}

double diagonal_cost(DiagramPoint a, GroundMetric metric) {
  const double mid = 0.5 * (a.birth + a.death);
  return point_cost(a, {mid, mid}, metric);
}

WassersteinResult wasserstein2(std::span<const DiagramPoint> a, std::span<const DiagramPoint> b,
                               GroundMetric metric) {
  const std::size_t n1 = a.size();
  const std::size_t n2 = b.size();
  const std::size_t n = n1 + n2;
  WassersteinResult out;
  if (n == 0) return out;

  // Rows: points of a, then one diagonal slot per point of b.
  // Columns: points of b, then one diagonal slot per point of a.
  std::vector<double> cost(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      double c = 0.0;
      if (i < n1 && j < n2) {
        c = point_cost(a[i], b[j], metric);
      } else if (i < n1) {
        c = diagonal_cost(a[i], metric);
      } else if (j < n2) {
        c = diagonal_cost(b[j], metric);
      }
      cost[i * n + j] = c;
    }
  }
  const auto col_of_row = solve_assignment(cost, n);

  double total = 0.0;
  for (std::size_t i = 0; i < n1; ++i) {
    const std::size_t j = col_of_row[i];
    const double c = cost[i * n + j];
    out.matching.assignment.push_back({i, j < n2 ? j : MatchingResult::kDiagonal, c});
    total += c;
  }
  for (std::size_t i = n1; i < n; ++i) {
    const std::size_t j = col_of_row[i];
    if (j < n2) {
      const double c = cost[i * n + j];
      out.matching.assignment.push_back({MatchingResult::kDiagonal, j, c});
      total += c;
    }
  }
  out.matching.cost = total;
  out.distance = std::sqrt(std::max(0.0, total));
  return out;
}

MatchingResult forced_matching_loss(std::span<const DiagramPoint> pred, std::span<const DiagramPoint> target) {
  if (pred.size() != target.size()) {
    throw DataError("forced matching needs equal sizes, got " + std::to_string(pred.size()) + " predictions and " +
                    std::to_string(target.size()) + " targets");
  }
  const std::size_t n = pred.size();
  MatchingResult out;
  if (n == 0) return out;
  std::vector<double> cost(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) cost[i * n + j] = point_cost(pred[i], target[j]);
  }
  const auto col_of_row = solve_assignment(cost, n);
  for (std::size_t i = 0; i < n; ++i) {
    const double c = cost[i * n + col_of_row[i]];
    out.assignment.push_back({i, col_of_row[i], c});
    out.cost += c;
  }
  return out;
}

}  // namespace gepd
