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

#include "resalloc/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "resalloc/oracle.hpp"

namespace resalloc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

void BoundParams::validate() const {
  if (!(smoothness > 0.0)) throw ConfigError("B must be positive");
  if (!(lipschitz > 0.0)) throw ConfigError("L must be positive");
  if (!(alpha > 0.0 && alpha <= 1.0)) throw ConfigError("alpha must lie in (0, 1]");
  if (!(beta > 0.0 && beta <= 1.0)) throw ConfigError("beta must lie in (0, 1]");
}

double compute_opt(const Environment& env) {
  return solve_exact_dp(env.true_means(), env.config()).value;
}

OptInterval compute_opt_continuous_reference(const RewardModel& model,
                                             double budget, int num_resources,
                                             int refinement,
                                             std::optional<double> lipschitz) {
  if (refinement < 2) throw ConfigError("reference refinement must be >= 2");
  const double lip = lipschitz.value_or(lipschitz_constant(model));
  const double pitch = budget / refinement;
  ProblemConfig cfg(num_resources, budget, ActionSpace::Grid(refinement + 1, pitch));
  Environment env(model, cfg);
  OptInterval interval;
  interval.lo = compute_opt(env);
  interval.hi = interval.lo + lip * num_resources * pitch;
  return interval;
}

GapReport compute_gaps(const MeanMatrix& truth, const ProblemConfig& cfg,
                       double alpha) {
  check_shape(truth, cfg);
  if (!(alpha > 0.0 && alpha <= 1.0)) throw ConfigError("alpha must lie in (0, 1]");
  const double space_size =
      std::pow(static_cast<double>(cfg.num_levels()), cfg.num_resources());
  if (space_size > kMaxGapEnumeration) {
    throw EnumerationInfeasible("gap enumeration infeasible: N^K = " +
                                std::to_string(space_size) + " exceeds 1e7");
  }

  GapReport report;
  report.delta_min_per_arm = MeanMatrix(cfg.num_resources(), cfg.num_levels(), kInf);
  report.delta_max_per_arm = MeanMatrix(cfg.num_resources(), cfg.num_levels(), 0.0);

  double opt = -kInf;
  for_each_feasible_allocation(cfg, [&](const Allocation& alloc) {
    opt = std::max(opt, allocation_value(alloc, truth));
  });
  report.opt = opt;
  const double target = alpha * opt;

  for_each_feasible_allocation(cfg, [&](const Allocation& alloc) {
    const double gap = std::max(0.0, target - allocation_value(alloc, truth));
    if (gap <= 0.0) return;
    for (int k = 0; k < cfg.num_resources(); ++k) {
      const int a = alloc.levels[k];
      report.delta_min_per_arm(k, a) = std::min(report.delta_min_per_arm(k, a), gap);
      report.delta_max_per_arm(k, a) = std::max(report.delta_max_per_arm(k, a), gap);
    }
  });

  double delta_min = kInf;
  for (double d : report.delta_min_per_arm.flat()) delta_min = std::min(delta_min, d);
  report.delta_min = std::isfinite(delta_min) ? delta_min : 0.0;
  for (double d : report.delta_max_per_arm.flat()) {
    report.delta_max = std::max(report.delta_max, d);
  }
  return report;
}

GapReport compute_gaps(const Environment& env, double alpha) {
  return compute_gaps(env.true_means(), env.config(), alpha);
}

RegretReport regret_series(std::span<const double> expected_rewards, double opt,
                           double alpha, double beta) {
  const double baseline = alpha * beta * opt;
  RegretReport report;
  report.cumulative.reserve(expected_rewards.size());
  double running = 0.0;
  for (double r : expected_rewards) {
    running += baseline - r;
    report.cumulative.push_back(running);
  }
  report.final_regret = running;
  return report;
}

RegretReport regret_series(const RunTrace& trace, double opt, double alpha,
                           double beta) {
  return regret_series(trace.expected_rewards(), opt, alpha, beta);
}

RegretReport regret_series_cra(const RunTrace& trace, double opt_grid,
                               double opt_reference, double alpha, double beta) {
  RegretReport report = regret_series(trace, opt_reference, alpha, beta);
  const double horizon = static_cast<double>(trace.length());
  report.learning_term = regret_series(trace, opt_grid, alpha, beta).final_regret;
  report.discretization_term = horizon * alpha * beta * (opt_reference - opt_grid);
  return report;
}

double theorem1_dependent_bound(const GapReport& gaps, const BoundParams& params,
                                double budget, int num_resources, int num_levels,
                                std::int64_t horizon) {
  if (!gaps.has_positive_gap() || !(gaps.delta_min > 0.0)) {
    throw UnsupportedError("distribution-dependent bound needs Delta_min > 0");
  }
  if (horizon < 1) throw ConfigError("horizon must be >= 1");
  const double b = params.smoothness;
  const double log_t = std::log(static_cast<double>(horizon));
  double sum = 0.0;
  for (double delta : gaps.delta_min_per_arm.flat()) {
    if (std::isfinite(delta)) sum += 48.0 * b * b * budget * log_t / delta;
  }
  const double arms = static_cast<double>(num_resources) * num_levels;
  return sum + 2.0 * b * arms + std::numbers::pi * std::numbers::pi / 3.0 * arms *
                                    gaps.delta_max;
}

double theorem1_independent_bound(const BoundParams& params, double budget,
                                  int num_resources, int num_levels,
                                  std::int64_t horizon, double delta_max) {
  if (horizon < 1) throw ConfigError("horizon must be >= 1");
  const double b = params.smoothness;
  const double arms = static_cast<double>(num_resources) * num_levels;
  const double t = static_cast<double>(horizon);
  return 14.0 * b * std::sqrt(budget * arms * t * std::log(t)) + 2.0 * b * arms +
         std::numbers::pi * std::numbers::pi / 3.0 * arms * delta_max;
}

double theorem2_rate(std::int64_t horizon) {
  const double t = static_cast<double>(horizon);
  return std::pow(t, 2.0 / 3.0) * std::cbrt(std::log(t));
}

ScalingReport theorem2_scaling_check(
    const std::map<std::int64_t, double>& final_regrets,
    const BoundParams& params, double budget, int num_resources,
    int replications, double slack) {
  if (final_regrets.size() < 3) {
    throw ConfigError("scaling check needs at least 3 horizons");
  }
  const std::int64_t first = final_regrets.begin()->first;
  const std::int64_t last = final_regrets.rbegin()->first;
  if (first < 2 || static_cast<double>(last) < 100.0 * static_cast<double>(first)) {
    throw ConfigError("scaling check horizons must be >= 2 and span two decades");
  }
  if (replications < 20) {
    throw ConfigError("scaling check needs regrets averaged over >= 20 replications");
  }
  const double shape = std::pow(params.smoothness * budget * num_resources, 2.0 / 3.0) *
                       std::cbrt(params.lipschitz);

  ScalingReport report;
  report.slack = slack;
  report.pass = true;
  for (const auto& [horizon, regret] : final_regrets) {
    const double normalized = regret / theorem2_rate(horizon);
    if (!report.normalized.empty()) {
      const double previous = report.normalized.back();
      if (normalized > previous + slack * std::abs(previous)) report.pass = false;
    }
    report.horizons.push_back(horizon);
    report.normalized.push_back(normalized);
    report.bound_constant.push_back(normalized / shape);
  }
  return report;
}

bool confidence_violated(std::span<const std::int64_t> counts,
                         std::span<const double> means, const MeanMatrix& truth,
                         std::int64_t round) {
  const auto mu = truth.flat();
  if (counts.size() != mu.size() || means.size() != mu.size()) {
    throw ShapeError("snapshot does not match the mean matrix");
  }
  for (std::size_t i = 0; i < mu.size(); ++i) {
    if (counts[i] == 0) continue;
    if (std::abs(means[i] - mu[i]) >= confidence_radius(counts[i], round)) return true;
  }
  return false;
}

double lemma1_expected_violations(int num_arms, std::int64_t horizon) {
  double sum = 0.0;
  // Smallest terms first.
  for (std::int64_t t = horizon; t >= 1; --t) {
    const double td = static_cast<double>(t);
    sum += 1.0 / (td * td);
  }
  return 2.0 * num_arms * sum;
}

Lemma1Report lemma1_diagnostic(const RunTrace& trace, const MeanMatrix& truth) {
  const auto& snapshots = trace.snapshots();
  if (snapshots.empty() || static_cast<std::int64_t>(snapshots.size()) != trace.length()) {
    throw ContractViolation("coverage diagnostic needs per-round learner snapshots");
  }
  Lemma1Report report;
  report.violated.reserve(snapshots.size());
  for (std::size_t i = 0; i < snapshots.size(); ++i) {
    const bool bad = confidence_violated(snapshots[i].counts, snapshots[i].means, truth,
                                         static_cast<std::int64_t>(i) + 1);
    report.violated.push_back(bad);
    report.violation_rounds += bad ? 1 : 0;
  }
  report.expected_bound = lemma1_expected_violations(
      static_cast<int>(truth.size()), static_cast<std::int64_t>(snapshots.size()));
  return report;
}

RoundObserver Lemma1Monitor::observer() {
  return [this](std::int64_t round, const ArmStats& stats, const UcbVector&) {
    if (static_cast<std::int64_t>(violated_.size()) != round - 1) {
      throw ContractViolation("coverage monitor saw rounds out of order");
    }
    violated_.push_back(
        confidence_violated(stats.counts().flat(), stats.means().flat(), truth_, round));
  };
}

Lemma1Report Lemma1Monitor::report() const {
  Lemma1Report report;
  report.violated = violated_;
  report.violation_rounds = std::count(violated_.begin(), violated_.end(), true);
  report.expected_bound = lemma1_expected_violations(
      static_cast<int>(truth_.size()), static_cast<std::int64_t>(violated_.size()));
  return report;
}

}  // namespace resalloc
