// Copyright 2026 The resalloc Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "resalloc/oracle.hpp"
#include "test_support.hpp"

namespace resalloc {
namespace {

using testing::Gen;

MeanMatrix two_by_three() {
  MeanMatrix m(2, 3);
  m(0, 0) = 0.0; m(0, 1) = 0.5; m(0, 2) = 0.6;
  m(1, 0) = 0.0; m(1, 1) = 0.3; m(1, 2) = 0.9;
  return m;
}

TEST(ExactDp, WorkedInstance) {
  ProblemConfig cfg(2, 2, ActionSpace::Discrete(3));
  const auto result = solve_exact_dp(two_by_three(), cfg);
  EXPECT_EQ(result.allocation.levels, (std::vector<int>{0, 2}));
  EXPECT_DOUBLE_EQ(result.value, 0.9);
  // The six feasible values, computed by hand.
  std::vector<double> values;
  for_each_feasible_allocation(cfg, [&](const Allocation& a) {
    values.push_back(allocation_value(a, two_by_three()));
  });
  std::sort(values.begin(), values.end());
  const std::vector<double> expected{0.0, 0.3, 0.5, 0.6, 0.8, 0.9};
  ASSERT_EQ(values.size(), expected.size());
  for (std::size_t i = 0; i < values.size(); ++i) EXPECT_NEAR(values[i], expected[i], 1e-15);
}

TEST(ExactDp, AllZeroMeansPickZeroBudget) {
  ProblemConfig cfg(3, 4, ActionSpace::Discrete(3));
  const auto result = solve_exact_dp(MeanMatrix(3, 3, 0.0), cfg);
  EXPECT_EQ(result.allocation, zero_allocation(cfg));
  EXPECT_EQ(result.value, 0.0);
}

TEST(ExactDp, ConstantMatrixPicksZeroBudget) {
  ProblemConfig cfg(4, 6, ActionSpace::Discrete(4));
  const auto result = solve_exact_dp(MeanMatrix(4, 4, 1.0), cfg);
  EXPECT_EQ(result.allocation, zero_allocation(cfg));
  EXPECT_EQ(result.value, 4.0);
}

TEST(ExactDp, SlackBudgetTakesRowArgmax) {
  Gen gen(21);
  for (int trial = 0; trial < 50; ++trial) {
    const int k = gen.integer(1, 4);
    const int n = gen.integer(1, 5);
    ProblemConfig cfg(k, k * (n - 1), ActionSpace::Discrete(n));
    MeanMatrix m(k, n);
    // Coarse values force ties.
    for (double& x : m.flat()) x = gen.integer(0, 3) / 4.0;
    const auto result = solve_exact_dp(m, cfg);
    for (int r = 0; r < k; ++r) {
      const auto row = m.row(r);
      const int best = static_cast<int>(std::max_element(row.begin(), row.end()) - row.begin());
      EXPECT_EQ(result.allocation.levels[r], best);
    }
  }
}

TEST(ExactDp, EqualsEnumerationExactly) {
  Gen gen(22);
  for (int trial = 0; trial < 500; ++trial) {
    const ProblemConfig cfg = gen.discrete(4, 5, 8);
    const MeanMatrix m = gen.means(cfg.num_resources(), cfg.num_levels());
    const auto dp = solve_exact_dp(m, cfg);
    const auto bf = testing::brute_force(m, cfg);
    EXPECT_EQ(dp.value, bf.best);
    EXPECT_TRUE(is_feasible(dp.allocation, cfg));
    EXPECT_EQ(allocation_value(dp.allocation, m), dp.value);
  }
}

TEST(ExactDp, EqualsEnumerationOnGrids) {
  Gen gen(23);
  for (int trial = 0; trial < 200; ++trial) {
    const int k = gen.integer(1, 3);
    const int n = gen.integer(2, 6);
    const double q = gen.uniform(0.1, 2.0);
    ProblemConfig cfg(k, q, ActionSpace::Grid(n, q / (n - 1)));
    const MeanMatrix m = gen.means(k, n);
    EXPECT_EQ(solve_exact_dp(m, cfg).value, testing::brute_force(m, cfg).best);
  }
}

TEST(ExactDp, TieBreakSmallestBudgetThenLexicographic) {
  Gen gen(24);
  for (int trial = 0; trial < 300; ++trial) {
    const ProblemConfig cfg = gen.discrete(3, 4, 6);
    MeanMatrix m(cfg.num_resources(), cfg.num_levels());
    for (double& x : m.flat()) x = gen.integer(0, 2) / 2.0;
    const auto dp = solve_exact_dp(m, cfg);
    std::vector<int> expected;
    std::int64_t best_units = 0;
    double best = -1.0;
    testing::for_each_level_vector(cfg.num_resources(), cfg.num_levels(),
                                   [&](const std::vector<int>& l) {
      if (!testing::direct_feasible(l, cfg)) return;
      const double v = testing::direct_value(l, m);
      std::int64_t units = 0;
      for (int a : l) units += a;
      if (v > best || (v == best && units < best_units) ||
          (v == best && units == best_units && l < expected)) {
        best = v;
        best_units = units;
        expected = l;
      }
    });
    EXPECT_EQ(dp.allocation.levels, expected);
  }
}

TEST(ExactDp, Monotone) {
  Gen gen(25);
  for (int trial = 0; trial < 300; ++trial) {
    const ProblemConfig cfg = gen.discrete(4, 5, 8);
    const MeanMatrix lo = gen.means(cfg.num_resources(), cfg.num_levels());
    MeanMatrix hi = lo;
    for (double& x : hi.flat()) x = std::min(1.0, x + gen.uniform(0.0, 0.3));
    EXPECT_LE(solve_exact_dp(lo, cfg).value, solve_exact_dp(hi, cfg).value);
  }
}

TEST(Objective, OneNormSmoothness) {
  Gen gen(26);
  for (int trial = 0; trial < 500; ++trial) {
    const ProblemConfig cfg = gen.discrete(4, 5, 8);
    const int k = cfg.num_resources();
    const int n = cfg.num_levels();
    const MeanMatrix a = gen.means(k, n);
    const MeanMatrix b = gen.means(k, n);
    std::vector<int> levels(k);
    for (int& l : levels) l = gen.integer(0, n - 1);
    double l1 = 0.0;
    for (int r = 0; r < k; ++r) l1 += std::abs(a(r, levels[r]) - b(r, levels[r]));
    EXPECT_LE(std::abs(allocation_value({levels}, a) - allocation_value({levels}, b)),
              1.0 * l1 + 1e-12);
  }
}

TEST(ExactDp, Deterministic) {
  Gen gen(27);
  for (int trial = 0; trial < 100; ++trial) {
    const ProblemConfig cfg = gen.discrete(4, 5, 8);
    const MeanMatrix m = gen.means(cfg.num_resources(), cfg.num_levels());
    const auto first = solve_exact_dp(m, cfg);
    const auto second = solve_exact_dp(m, cfg);
    EXPECT_EQ(first.allocation, second.allocation);
    EXPECT_EQ(first.value, second.value);
  }
}

TEST(ExactDp, Errors) {
  ProblemConfig cfg(2, 2, ActionSpace::Discrete(3));
  EXPECT_THROW(solve_exact_dp(MeanMatrix(2, 2), cfg), ShapeError);
  MeanMatrix bad = two_by_three();
  bad(1, 1) = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(solve_exact_dp(bad, cfg), NumericError);
  bad(1, 1) = std::numeric_limits<double>::infinity();
  EXPECT_THROW(solve_greedy(bad, cfg), NumericError);
}

TEST(Greedy, HandTrace) {
  // Ratios at the start: r0 -> level 1 gains 0.5/unit, level 2 0.3/unit;
  // r1 -> level 1 0.3/unit, level 2 0.45/unit. Take r0:1 (0.5). With one unit
  // left: r0 1->2 gains 0.1, r1 0->1 gains 0.3. Take r1:1. Budget spent.
  ProblemConfig cfg(2, 2, ActionSpace::Discrete(3));
  const auto result = solve_greedy(two_by_three(), cfg);
  EXPECT_EQ(result.allocation.levels, (std::vector<int>{1, 1}));
  EXPECT_NEAR(result.value, 0.8, 1e-15);
}

TEST(Greedy, AllZeroMeans) {
  ProblemConfig cfg(3, 4, ActionSpace::Discrete(3));
  EXPECT_EQ(solve_greedy(MeanMatrix(3, 3, 0.0), cfg).allocation, zero_allocation(cfg));
}

TEST(Greedy, SingleResourceMatchesExact) {
  Gen gen(28);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = gen.integer(1, 5);
    const int q = gen.integer(n - 1, 8);
    ProblemConfig cfg(1, q, ActionSpace::Discrete(n));
    MeanMatrix m(1, n);
    // Monotone means.
    double level = 0.0;
    for (int a = 0; a < n; ++a) m(0, a) = level += gen.uniform(0.0, 0.25);
    EXPECT_EQ(solve_greedy(m, cfg).value, testing::brute_force(m, cfg).best);
  }
}

TEST(Greedy, FeasibleAndBelowExact) {
  Gen gen(29);
  for (int trial = 0; trial < 300; ++trial) {
    const ProblemConfig cfg = gen.discrete(4, 5, 8);
    const MeanMatrix m = gen.means(cfg.num_resources(), cfg.num_levels());
    const auto g = solve_greedy(m, cfg);
    EXPECT_TRUE(is_feasible(g.allocation, cfg));
    EXPECT_LE(g.value, solve_exact_dp(m, cfg).value);
  }
}

TEST(OracleSpec, Validation) {
  EXPECT_NO_THROW((OracleSpec{OracleKind::kExactDp, 1.0, 1.0}.validate()));
  EXPECT_THROW((OracleSpec{OracleKind::kExactDp, 0.9, 1.0}.validate()), ConfigError);
  EXPECT_THROW((OracleSpec{OracleKind::kGreedy, 0.0, 1.0}.validate()), ConfigError);
  EXPECT_THROW((OracleSpec{OracleKind::kGreedy, 0.5, 1.5}.validate()), ConfigError);
  EXPECT_NO_THROW((OracleSpec{OracleKind::kGreedy, 0.5, 0.5}.validate()));
}

TEST(CoinFlipOracle, FailureRateNearOneMinusBeta) {
  ProblemConfig cfg(2, 2, ActionSpace::Discrete(3));
  auto oracle = make_oracle({OracleKind::kExactDp, 1.0, 0.7}, 99);
  const int calls = 20000;
  int zeros = 0;
  for (int i = 0; i < calls; ++i) {
    const auto r = oracle->solve(two_by_three(), cfg);
    if (r.allocation == zero_allocation(cfg)) {
      ++zeros;
      EXPECT_EQ(r.value, 0.0);
    } else {
      EXPECT_EQ(r.allocation.levels, (std::vector<int>{0, 2}));
    }
  }
  const double rate = static_cast<double>(zeros) / calls;
  const double se = std::sqrt(0.3 * 0.7 / calls);
  EXPECT_NEAR(rate, 0.3, 4 * se);
}

TEST(CoinFlipOracle, ReproducibleFromSeed) {
  ProblemConfig cfg(2, 2, ActionSpace::Discrete(3));
  auto a = make_oracle({OracleKind::kExactDp, 1.0, 0.5}, 5);
  auto b = make_oracle({OracleKind::kExactDp, 1.0, 0.5}, 5);
  for (int i = 0; i < 200; ++i) {
    EXPECT_EQ(a->solve(two_by_three(), cfg).allocation, b->solve(two_by_three(), cfg).allocation);
  }
}

TEST(MakeOracle, BetaOneIsPlainSolver) {
  ProblemConfig cfg(2, 2, ActionSpace::Discrete(3));
  auto oracle = make_oracle({OracleKind::kGreedy, 0.8, 1.0});
  EXPECT_EQ(oracle->spec().kind, OracleKind::kGreedy);
  for (int i = 0; i < 20; ++i) {
    EXPECT_EQ(oracle->solve(two_by_three(), cfg).allocation.levels, (std::vector<int>{1, 1}));
  }
}

}  // namespace
}  // namespace resalloc
