#pragma once

#include <span>
#include <vector>

namespace gepd {

/// Minimum-cost perfect assignment on a square cost matrix (row-major,
/// n x n) by the shortest-augmenting-path Hungarian method with potentials,
/// O(n^3). Rows are inserted in index order and ties resolve toward the
/// lowest column index, so the result is deterministic.
/// Returns column_of_row.
std::vector<std::size_t> solve_assignment(std::span<const double> cost, std::size_t n);

}  // namespace gepd
