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

#include "resalloc/cucb_dra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace resalloc {

ArmStats::ArmStats(const ProblemConfig& cfg)
    : counts_(cfg.num_resources(), cfg.num_levels(), 0),
      means_(cfg.num_resources(), cfg.num_levels(), 0.0) {}

void ArmStats::update(const Allocation& alloc, std::span<const double> rewards) {
  const int num_resources = counts_.num_resources();
  if (static_cast<int>(alloc.levels.size()) != num_resources ||
      static_cast<int>(rewards.size()) != num_resources) {
    throw ShapeError("update needs one level and one reward per resource");
  }
  for (int k = 0; k < num_resources; ++k) {
    if (!(rewards[k] >= 0.0 && rewards[k] <= 1.0)) {
      throw ContractViolation("reward for resource " + std::to_string(k) +
                              " outside [0, 1]");
    }
    if (alloc.levels[k] < 0 || alloc.levels[k] >= counts_.num_levels()) {
      throw RangeError("allocation level out of range");
    }
  }
  for (int k = 0; k < num_resources; ++k) {
    const int a = alloc.levels[k];
    const std::int64_t count = ++counts_(k, a);
    means_(k, a) += (rewards[k] - means_(k, a)) / static_cast<double>(count);
  }
  ++rounds_;
}

double confidence_radius(std::int64_t count, std::int64_t round) {
  if (round < 1) throw ContractViolation("round index starts at 1");
  if (count <= 0) return std::numeric_limits<double>::infinity();
  // sqrt(3 ln t / (2 T)), written as compute_ucb evaluates it.
  return std::sqrt(1.5 * std::log(static_cast<double>(round)) /
                   static_cast<double>(count));
}

UcbVector compute_ucb(const ArmStats& stats, std::int64_t round) {
  if (round < 1) throw ContractViolation("round index starts at 1");
  const auto& counts = stats.counts();
  const auto& means = stats.means();
  UcbVector ucb{MeanMatrix(counts.num_resources(), counts.num_levels()),
                MeanMatrix(counts.num_resources(), counts.num_levels())};
  const double scaled_log = 1.5 * std::log(static_cast<double>(round));
  const auto count_flat = counts.flat();
  const auto mean_flat = means.flat();
  auto index_flat = ucb.index.flat();
  auto radius_flat = ucb.radius.flat();
  for (std::size_t i = 0; i < count_flat.size(); ++i) {
    if (count_flat[i] == 0) {
      radius_flat[i] = std::numeric_limits<double>::infinity();
      index_flat[i] = 1.0;
      continue;
    }
    const double radius = std::sqrt(scaled_log / static_cast<double>(count_flat[i]));
    radius_flat[i] = radius;
    index_flat[i] = std::min(1.0, mean_flat[i] + radius);
  }
  return ucb;
}

Allocation select_allocation(const ArmStats& stats, std::int64_t round,
                             Oracle& oracle, const ProblemConfig& cfg) {
  const UcbVector ucb = compute_ucb(stats, round);
  return oracle.solve(ucb.index, cfg).allocation;
}

void RunTrace::reserve(std::int64_t rounds) {
  const auto n = static_cast<std::size_t>(rounds);
  levels_.reserve(n * num_resources_);
  rewards_.reserve(n * num_resources_);
  expected_.reserve(n);
  cumulative_.reserve(n);
}

void RunTrace::append(const Allocation& alloc, std::span<const double> rewards,
                      double expected_reward) {
  if (static_cast<int>(alloc.levels.size()) != num_resources_ ||
      static_cast<int>(rewards.size()) != num_resources_) {
    throw ShapeError("trace record does not match K");
  }
  levels_.insert(levels_.end(), alloc.levels.begin(), alloc.levels.end());
  rewards_.insert(rewards_.end(), rewards.begin(), rewards.end());
  const double previous = cumulative_.empty() ? 0.0 : cumulative_.back();
  expected_.push_back(expected_reward);
  cumulative_.push_back(previous + expected_reward);
}

std::span<const int> RunTrace::levels(std::int64_t round) const {
  if (round < 1 || round > length()) throw RangeError("round outside trace");
  return {levels_.data() + (round - 1) * num_resources_,
          static_cast<std::size_t>(num_resources_)};
}

std::span<const double> RunTrace::rewards(std::int64_t round) const {
  if (round < 1 || round > length()) throw RangeError("round outside trace");
  return {rewards_.data() + (round - 1) * num_resources_,
          static_cast<std::size_t>(num_resources_)};
}

void RunTrace::add_snapshot(const ArmStats& stats) {
  const auto counts = stats.counts().flat();
  const auto means = stats.means().flat();
  snapshots_.push_back({{counts.begin(), counts.end()}, {means.begin(), means.end()}});
}

CucbDra::CucbDra(ProblemConfig cfg, Oracle& oracle)
    : cfg_(std::move(cfg)), oracle_(&oracle), stats_(cfg_) {}

Allocation CucbDra::select() const {
  return select_allocation(stats_, next_round(), *oracle_, cfg_);
}

void CucbDra::observe(const Allocation& alloc, std::span<const double> rewards) {
  stats_.update(alloc, rewards);
}

RunTrace run_dra(const Environment& env, Oracle& oracle, std::int64_t horizon,
                 const RunOptions& options) {
  if (horizon < 1) throw ConfigError("horizon must be >= 1");
  const ProblemConfig& cfg = env.config();
  const MeanMatrix truth = env.true_means();
  const FeedbackSource& feedback = env;

  CucbDra learner(cfg, oracle);
  RunTrace trace(cfg.num_resources());
  trace.reserve(horizon);
  std::vector<double> rewards(cfg.num_resources());

  for (std::int64_t t = 1; t <= horizon; ++t) {
    if (options.record_snapshots) trace.add_snapshot(learner.stats());
    const UcbVector ucb = learner.current_ucb();
    if (options.observer) options.observer(t, learner.stats(), ucb);
    const Allocation alloc = oracle.solve(ucb.index, cfg).allocation;
    if (!is_feasible(alloc, cfg)) {
      throw ContractViolation("oracle returned an infeasible allocation");
    }
    for (int k = 0; k < cfg.num_resources(); ++k) {
      rewards[k] = feedback.observe({k, alloc.levels[k]}, t);
    }
    learner.observe(alloc, rewards);
    trace.append(alloc, rewards, allocation_value(alloc, truth));
  }
  return trace;
}

}  // namespace resalloc
