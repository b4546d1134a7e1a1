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

#ifndef RESALLOC_ANALYSIS_HPP_
#define RESALLOC_ANALYSIS_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "resalloc/core.hpp"
#include "resalloc/cucb_dra.hpp"
#include "resalloc/environment.hpp"

namespace resalloc {

// Ground truth and regret accounting. Everything here may read true means;
// nothing here is visible to a learner.

struct BoundParams {
  double smoothness = 1.0;  // B; r' sums one mean per resource, so B = 1
  double lipschitz = 1.0;   // L
  double alpha = 1.0;
  double beta = 1.0;

  void validate() const;
};

// Optimal expected reward over the environment's action space.
double compute_opt(const Environment& env);

struct OptInterval {
  double lo = 0.0;
  double hi = 0.0;
  double width() const { return hi - lo; }
};

// Brackets the optimum over the continuous budget [0, Q]: `lo` is the exact
// optimum on a reference grid of pitch Q / refinement, and `hi` adds the
// Lipschitz allowance L * K * pitch.
OptInterval compute_opt_continuous_reference(
    const RewardModel& model, double budget, int num_resources, int refinement,
    std::optional<double> lipschitz = std::nullopt);

// Largest N^K accepted by compute_gaps.
inline constexpr double kMaxGapEnumeration = 1e7;

struct GapReport {
  // +inf where no allocation with a positive gap uses the arm.
  MeanMatrix delta_min_per_arm;
  // 0 where no allocation with a positive gap uses the arm.
  MeanMatrix delta_max_per_arm;
  // Smallest finite per-arm gap, or 0 when no allocation has a positive gap.
  double delta_min = 0.0;
  double delta_max = 0.0;
  double opt = 0.0;

  bool has_positive_gap() const { return delta_max > 0.0; }
};

// Enumerates every feasible allocation; gap_a = max(0, alpha * opt - r(a)).
GapReport compute_gaps(const MeanMatrix& truth, const ProblemConfig& cfg,
                       double alpha);
GapReport compute_gaps(const Environment& env, double alpha);

struct RegretReport {
  std::vector<double> cumulative;  // cumulative[t - 1] is Reg(t)
  double final_regret = 0.0;
  // Continuous-budget runs only: learning regret on the grid and the
  // discretization allowance T * alpha * beta * (opt_ref - opt_grid).
  std::optional<double> learning_term;
  std::optional<double> discretization_term;
};

RegretReport regret_series(const RunTrace& trace, double opt, double alpha,
                           double beta);
RegretReport regret_series(std::span<const double> expected_rewards, double opt,
                           double alpha, double beta);
// Regret against the continuous optimum, split into grid and
// discretization terms.
RegretReport regret_series_cra(const RunTrace& trace, double opt_grid,
                               double opt_reference, double alpha, double beta);

// Distribution-dependent bound. Throws UnsupportedError when the instance
// has no positive gap.
double theorem1_dependent_bound(const GapReport& gaps, const BoundParams& params,
                                double budget, int num_resources, int num_levels,
                                std::int64_t horizon);

double theorem1_independent_bound(const BoundParams& params, double budget,
                                  int num_resources, int num_levels,
                                  std::int64_t horizon, double delta_max);

// T^(2/3) (ln T)^(1/3).
double theorem2_rate(std::int64_t horizon);

struct ScalingReport {
  std::vector<std::int64_t> horizons;
  std::vector<double> normalized;      // Reg(T) / theorem2_rate(T)
  std::vector<double> bound_constant;  // normalized / ((BQK)^(2/3) L^(1/3))
  double slack = 0.25;
  bool pass = false;
};

// Shape check: the normalized regrets must be non-increasing, each allowed to
// exceed its predecessor by at most `slack` relative.
ScalingReport theorem2_scaling_check(
    const std::map<std::int64_t, double>& final_regrets,
    const BoundParams& params, double budget, int num_resources,
    int replications, double slack = 0.25);

// True if some tried arm has |mean_hat - mean| >= radius at round t.
bool confidence_violated(std::span<const std::int64_t> counts,
                         std::span<const double> means, const MeanMatrix& truth,
                         std::int64_t round);

// sum_{t=1..T} 2 |S| / t^2; never exceeds (pi^2 / 3) |S|.
double lemma1_expected_violations(int num_arms, std::int64_t horizon);

struct Lemma1Report {
  std::vector<bool> violated;  // violated[t - 1] for round t
  std::int64_t violation_rounds = 0;
  double expected_bound = 0.0;  // lemma1_expected_violations(|S|, T)
};

// Requires a trace recorded with snapshots.
Lemma1Report lemma1_diagnostic(const RunTrace& trace, const MeanMatrix& truth);

// Streaming variant for long runs: plug observer() into RunOptions.
class Lemma1Monitor {
 public:
  explicit Lemma1Monitor(MeanMatrix truth) : truth_(std::move(truth)) {}

  RoundObserver observer();
  Lemma1Report report() const;

 private:
  MeanMatrix truth_;
  std::vector<bool> violated_;
};

}  // namespace resalloc

#endif  // RESALLOC_ANALYSIS_HPP_
