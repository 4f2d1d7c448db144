#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "gepd/persistence.hpp"

namespace gepd {

struct DiagramPoint {
  double birth = 0.0;
  double death = 0.0;
  friend bool operator==(const DiagramPoint&, const DiagramPoint&) = default;
};

/// All points of both dimensions, dim0 first.
std::vector<DiagramPoint> diagram_points(const PersistenceDiagram& d);

enum class GroundMetric { euclidean, chebyshev };

struct MatchingResult {
  static constexpr std::size_t kDiagonal = std::numeric_limits<std::size_t>::max();
  struct Match {
    std::size_t left;   // index into the first diagram, or kDiagonal
    std::size_t right;  // index into the second diagram, or kDiagonal
    double cost;        // squared ground distance
  };
  double cost = 0.0;  // sum of match costs
  std::vector<Match> assignment;
};

/// Squared ground distance between two points.
double point_cost(DiagramPoint a, DiagramPoint b, GroundMetric metric = GroundMetric::euclidean);
/// Squared ground distance from a point to its diagonal projection.
double diagonal_cost(DiagramPoint a, GroundMetric metric = GroundMetric::euclidean);

struct WassersteinResult {
  double distance = 0.0;
  MatchingResult matching;
};

/// 2-Wasserstein distance where any point may instead go to its diagonal
/// projection ((b + d) / 2, (b + d) / 2). Exact, via an assignment on the
/// (n1 + n2)-square augmented cost matrix.
WassersteinResult wasserstein2(std::span<const DiagramPoint> a, std::span<const DiagramPoint> b,
                               GroundMetric metric = GroundMetric::euclidean);

/// Training loss: minimum over perfect bijections (no diagonal) of the sum
/// of squared Euclidean distances. Throws DataError on a size mismatch.
MatchingResult forced_matching_loss(std::span<const DiagramPoint> pred, std::span<const DiagramPoint> target);

}  // namespace gepd
