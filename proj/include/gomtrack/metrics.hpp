#pragma once

#include "gomtrack/types.hpp"

#include <cstddef>
#include <vector>

namespace gomtrack {

struct OspaParams {
  double cutoff = 30.0;
  double order = 1.0;
};

struct Assignment {
  /// row_to_col[i] is the column assigned to row i, or -1 when rows outnumber columns.
  std::vector<int> row_to_col;
  double cost = 0.0;
};

/// Minimum-cost assignment of the smaller side of a rectangular cost matrix (row-major).
Assignment optimal_assignment(const std::vector<std::vector<double>>& cost);

double ospa(const std::vector<Position>& estimate, const std::vector<Position>& truth,
            const OspaParams& params = {});

struct CardinalityPoint {
  std::size_t estimated = 0;
  std::size_t truth = 0;
};

std::vector<CardinalityPoint> cardinality_error_series(
    const std::vector<std::vector<Position>>& estimates,
    const std::vector<std::vector<Position>>& truth);

}  // namespace gomtrack
