#include "gomtrack/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace gomtrack {

namespace {

/// Hungarian algorithm with potentials for n <= m (rows <= columns), 1-based internally.
std::vector<int> hungarian(const std::vector<std::vector<double>>& a, std::size_t n, std::size_t m) {
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(m + 1, 0.0), minv(m + 1);
  std::vector<std::size_t> p(m + 1, 0), way(m + 1, 0);
  std::vector<char> used(m + 1);
  for (std::size_t i = 1; i <= n; ++i) {
    p[0] = i;
    std::size_t j0 = 0;
    std::fill(minv.begin(), minv.end(), inf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = p[j0];
      double delta = inf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= m; ++j) {
        if (used[j]) continue;
        const double cur = a[i0 - 1][j - 1] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= m; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<int> row_to_col(n, -1);
  for (std::size_t j = 1; j <= m; ++j) {
    if (p[j] != 0) row_to_col[p[j] - 1] = static_cast<int>(j - 1);
  }
  return row_to_col;
}

}  // namespace

Assignment optimal_assignment(const std::vector<std::vector<double>>& cost) {
  Assignment out;
  const std::size_t rows = cost.size();
  if (rows == 0) return out;
  const std::size_t cols = cost.front().size();
  for (const auto& row : cost) {
    if (row.size() != cols) throw std::invalid_argument("cost matrix must be rectangular");
    for (double c : row) {
      if (!(c >= 0.0) || !std::isfinite(c)) throw std::invalid_argument("costs must be finite and >= 0");
    }
  }
  if (cols == 0) {
    out.row_to_col.assign(rows, -1);
    return out;
  }
  if (rows <= cols) {
    out.row_to_col = hungarian(cost, rows, cols);
  } else {
    std::vector<std::vector<double>> t(cols, std::vector<double>(rows));
    for (std::size_t i = 0; i < rows; ++i) {
      for (std::size_t j = 0; j < cols; ++j) t[j][i] = cost[i][j];
    }
    const auto col_to_row = hungarian(t, cols, rows);
    out.row_to_col.assign(rows, -1);
    for (std::size_t j = 0; j < cols; ++j) out.row_to_col[col_to_row[j]] = static_cast<int>(j);
  }
  for (std::size_t i = 0; i < rows; ++i) {
    if (out.row_to_col[i] >= 0) out.cost += cost[i][out.row_to_col[i]];
  }
  return out;
}

double ospa(const std::vector<Position>& estimate, const std::vector<Position>& truth,
            const OspaParams& params) {
  if (params.cutoff <= 0.0 || params.order < 1.0) throw std::invalid_argument("invalid OSPA parameters");
  const auto& small = estimate.size() <= truth.size() ? estimate : truth;
  const auto& large = estimate.size() <= truth.size() ? truth : estimate;
  const std::size_t m = small.size();
  const std::size_t n = large.size();
  if (n == 0) return 0.0;
  const double cp = std::pow(params.cutoff, params.order);
  double total = cp * static_cast<double>(n - m);
  if (m > 0) {
    std::vector<std::vector<double>> cost(m, std::vector<double>(n));
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        const double d = std::min(params.cutoff, (small[i] - large[j]).norm());
        cost[i][j] = std::pow(d, params.order);
      }
    }
    total += optimal_assignment(cost).cost;
  }
  return std::pow(total / static_cast<double>(n), 1.0 / params.order);
}

std::vector<CardinalityPoint> cardinality_error_series(
    const std::vector<std::vector<Position>>& estimates,
    const std::vector<std::vector<Position>>& truth) {
  if (estimates.size() != truth.size()) throw std::invalid_argument("series lengths differ");
  std::vector<CardinalityPoint> out(estimates.size());
  for (std::size_t k = 0; k < estimates.size(); ++k) out[k] = {estimates[k].size(), truth[k].size()};
  return out;
}

}  // namespace gomtrack
