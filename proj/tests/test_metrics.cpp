#include "gomtrack/metrics.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

using namespace gomtrack;

namespace {

double brute_force_cost(const std::vector<std::vector<double>>& cost) {
  const std::size_t rows = cost.size();
  const std::size_t cols = cost.empty() ? 0 : cost[0].size();
  const bool transpose = rows > cols;
  const std::size_t small = std::min(rows, cols), large = std::max(rows, cols);
  std::vector<std::size_t> perm(large);
  std::iota(perm.begin(), perm.end(), 0);
  double best = INFINITY;
  do {
    double c = 0.0;
    for (std::size_t i = 0; i < small; ++i) c += transpose ? cost[perm[i]][i] : cost[i][perm[i]];
    best = std::min(best, c);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

double brute_force_ospa(const std::vector<Position>& x, const std::vector<Position>& y, double c, double p) {
  const auto& small = x.size() <= y.size() ? x : y;
  const auto& large = x.size() <= y.size() ? y : x;
  const std::size_t m = small.size(), n = large.size();
  if (n == 0) return 0.0;
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  double best = INFINITY;
  do {
    double s = 0.0;
    for (std::size_t i = 0; i < m; ++i) s += std::pow(std::min(c, (small[i] - large[perm[i]]).norm()), p);
    best = std::min(best, s);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return std::pow((best + std::pow(c, p) * static_cast<double>(n - m)) / static_cast<double>(n), 1.0 / p);
}

}  // namespace

TEST(Ospa, Examples) {
  EXPECT_EQ(ospa({}, {}), 0.0);
  EXPECT_EQ(ospa({{1, 2}, {3, 4}}, {{3, 4}, {1, 2}}), 0.0);
  EXPECT_DOUBLE_EQ(ospa({}, {{1, 1}}), 30.0);
  EXPECT_DOUBLE_EQ(ospa({{1, 1}, {2, 2}}, {}), 30.0);
  EXPECT_DOUBLE_EQ(ospa({{0, 0}}, {{3, 4}}), 5.0);
  EXPECT_DOUBLE_EQ(ospa({{0, 0}}, {{0, 0}, {100, 0}}), 15.0);
  EXPECT_DOUBLE_EQ(ospa({{0, 0}}, {{100, 0}}), 30.0);
}

TEST(Ospa, OrderTwo) {
  OspaParams p{30.0, 2.0};
  EXPECT_DOUBLE_EQ(ospa({{0, 0}}, {{0, 0}, {100, 0}}, p), std::sqrt(900.0 / 2.0));
}

TEST(Ospa, MetricProperties) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 60.0);
  std::uniform_int_distribution<int> count(0, 5);
  auto draw = [&] {
    std::vector<Position> v(count(rng));
    for (auto& p : v) p = Position(u(rng), u(rng));
    return v;
  };
  for (int t = 0; t < 300; ++t) {
    const auto a = draw(), b = draw(), c = draw();
    const double ab = ospa(a, b);
    EXPECT_NEAR(ab, ospa(b, a), 1e-12);
    EXPECT_GE(ab, 0.0);
    EXPECT_LE(ab, 30.0 + 1e-12);
    EXPECT_LE(ospa(a, c), ab + ospa(b, c) + 1e-9);
    EXPECT_NEAR(ab, brute_force_ospa(a, b, 30.0, 1.0), 1e-9);
  }
}

TEST(Assignment, Examples) {
  const auto one = optimal_assignment({{4.5}});
  EXPECT_EQ(one.row_to_col, std::vector<int>{0});
  EXPECT_EQ(one.cost, 4.5);
  const auto diag = optimal_assignment({{0, 5, 5}, {5, 0, 5}, {5, 5, 0}});
  EXPECT_EQ(diag.row_to_col, (std::vector<int>{0, 1, 2}));
  EXPECT_EQ(diag.cost, 0.0);
  const auto tall = optimal_assignment({{9}, {1}, {5}});
  EXPECT_EQ(tall.row_to_col, (std::vector<int>{-1, 0, -1}));
  EXPECT_EQ(tall.cost, 1.0);
}

TEST(Assignment, MatchesPermutationBruteForce) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0.0, 100.0);
  std::uniform_int_distribution<int> dim(1, 6);
  for (int t = 0; t < 1000; ++t) {
    const int rows = dim(rng), cols = dim(rng);
    std::vector<std::vector<double>> cost(rows, std::vector<double>(cols));
    for (auto& row : cost) {
      for (auto& v : row) v = u(rng);
    }
    const auto a = optimal_assignment(cost);
    EXPECT_NEAR(a.cost, brute_force_cost(cost), 1e-9);
    double recomputed = 0.0;
    std::vector<int> used;
    for (int i = 0; i < rows; ++i) {
      if (a.row_to_col[i] < 0) continue;
      recomputed += cost[i][a.row_to_col[i]];
      used.push_back(a.row_to_col[i]);
    }
    std::sort(used.begin(), used.end());
    EXPECT_EQ(std::adjacent_find(used.begin(), used.end()), used.end());
    EXPECT_EQ(used.size(), static_cast<std::size_t>(std::min(rows, cols)));
    EXPECT_NEAR(recomputed, a.cost, 1e-9);
  }
}

TEST(CardinalitySeries, Tabulates) {
  EXPECT_TRUE(cardinality_error_series({}, {}).empty());
  const auto s = cardinality_error_series({{}, {{0, 0}}, {{0, 0}, {1, 1}}}, {{{5, 5}}, {{0, 0}}, {}});
  ASSERT_EQ(s.size(), 3u);
  EXPECT_EQ(s[0].estimated, 0u);
  EXPECT_EQ(s[0].truth, 1u);
  EXPECT_EQ(s[1].estimated, 1u);
  EXPECT_EQ(s[2].estimated, 2u);
  EXPECT_EQ(s[2].truth, 0u);
  EXPECT_THROW(cardinality_error_series({{}}, {}), std::invalid_argument);
}
