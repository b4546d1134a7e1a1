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

#include "resalloc/core.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace resalloc {

ActionSpace ActionSpace::Discrete(int num_levels) {
  if (num_levels < 1) {
    throw ConfigError("action space needs at least one level, got " +
                      std::to_string(num_levels));
  }
  return ActionSpace(SpaceKind::kDiscrete, num_levels, 1.0);
}

ActionSpace ActionSpace::Grid(int num_levels, double pitch) {
  if (num_levels < 1) {
    throw ConfigError("grid needs at least one level, got " +
                      std::to_string(num_levels));
  }
  if (!std::isfinite(pitch) || pitch <= 0.0) {
    throw ConfigError("grid pitch must be positive and finite");
  }
  return ActionSpace(SpaceKind::kGrid, num_levels, pitch);
}

double ActionSpace::value(int level) const {
  if (level < 0 || level >= num_levels_) {
    throw RangeError("level " + std::to_string(level) + " outside [0, " +
                     std::to_string(num_levels_ - 1) + "]");
  }
  return kind_ == SpaceKind::kDiscrete ? static_cast<double>(level)
                                       : level * pitch_;
}

std::vector<double> ActionSpace::level_values() const {
  std::vector<double> values(num_levels_);
  for (int i = 0; i < num_levels_; ++i) values[i] = value(i);
  return values;
}

ProblemConfig::ProblemConfig(int num_resources, double budget, ActionSpace space)
    : num_resources_(num_resources), budget_(budget), space_(space) {
  if (num_resources_ < 1) {
    throw ConfigError("K must be >= 1, got " + std::to_string(num_resources_));
  }
  if (!std::isfinite(budget_) || budget_ < 0.0) {
    throw ConfigError("Q must be a finite nonnegative number");
  }
  if (space_.kind() == SpaceKind::kDiscrete &&
      space_.num_levels() > budget_ + 1.0) {
    throw ConfigError("discrete action space requires N <= Q + 1 (N = " +
                      std::to_string(space_.num_levels()) + ")");
  }
}

std::int64_t ProblemConfig::capacity_units() const {
  const std::int64_t useful =
      static_cast<std::int64_t>(num_resources_) * (space_.num_levels() - 1);
  if (space_.kind() == SpaceKind::kDiscrete) {
    return std::min<std::int64_t>(useful,
                                  static_cast<std::int64_t>(std::floor(budget_)));
  }
  const double limit = budget_ + kBudgetTolerance;
  const double pitch = space_.pitch();
  const double approx = std::floor(limit / pitch);
  if (approx >= static_cast<double>(useful)) return useful;
  auto units = static_cast<std::int64_t>(approx);
  // Snap to the exact boundary of the feasibility predicate.
  while (units > 0 && units * pitch > limit) --units;
  while ((units + 1) * pitch <= limit && units < useful) ++units;
  return units;
}

int arm_index(ArmId arm, const ProblemConfig& cfg) {
  if (arm.resource < 0 || arm.resource >= cfg.num_resources() ||
      arm.level < 0 || arm.level >= cfg.num_levels()) {
    throw RangeError("arm (" + std::to_string(arm.resource) + ", " +
                     std::to_string(arm.level) + ") out of range");
  }
  return arm.resource * cfg.num_levels() + arm.level;
}

ArmId arm_from_index(int index, const ProblemConfig& cfg) {
  if (index < 0 || index >= cfg.num_arms()) {
    throw RangeError("arm index " + std::to_string(index) + " out of range");
  }
  return {index / cfg.num_levels(), index % cfg.num_levels()};
}

Allocation zero_allocation(const ProblemConfig& cfg) {
  return Allocation{std::vector<int>(cfg.num_resources(), 0)};
}

namespace {

void check_levels(const Allocation& alloc, const ProblemConfig& cfg) {
  if (static_cast<int>(alloc.levels.size()) != cfg.num_resources()) {
    throw ShapeError("allocation has " + std::to_string(alloc.levels.size()) +
                     " entries, expected K = " +
                     std::to_string(cfg.num_resources()));
  }
  for (int level : alloc.levels) {
    if (level < 0 || level >= cfg.num_levels()) {
      throw RangeError("allocation level " + std::to_string(level) +
                       " out of range");
    }
  }
}

}  // namespace

std::int64_t budget_units(const Allocation& alloc, const ProblemConfig& cfg) {
  check_levels(alloc, cfg);
  std::int64_t units = 0;
  for (int level : alloc.levels) units += level;
  return units;
}

double budget_used(const Allocation& alloc, const ProblemConfig& cfg) {
  return static_cast<double>(budget_units(alloc, cfg)) * cfg.space().pitch();
}

bool is_feasible(const Allocation& alloc, const ProblemConfig& cfg) {
  const std::int64_t units = budget_units(alloc, cfg);
  if (cfg.space().kind() == SpaceKind::kDiscrete) {
    return static_cast<double>(units) <= cfg.budget();
  }
  return units * cfg.space().pitch() <= cfg.budget() + kBudgetTolerance;
}

double allocation_value(const Allocation& alloc, const MeanMatrix& means) {
  if (static_cast<int>(alloc.levels.size()) != means.num_resources()) {
    throw ShapeError("allocation length does not match mean matrix");
  }
  double total = 0.0;
  for (int k = means.num_resources() - 1; k >= 0; --k) {
    const int level = alloc.levels[k];
    if (level < 0 || level >= means.num_levels()) {
      throw RangeError("allocation level out of range");
    }
    total = means(k, level) + total;
  }
  return total;
}

void check_shape(const MeanMatrix& means, const ProblemConfig& cfg) {
  if (means.num_resources() != cfg.num_resources() ||
      means.num_levels() != cfg.num_levels()) {
    throw ShapeError("mean matrix is " + std::to_string(means.num_resources()) +
                     "x" + std::to_string(means.num_levels()) +
                     ", instance is " + std::to_string(cfg.num_resources()) +
                     "x" + std::to_string(cfg.num_levels()));
  }
}

namespace {

void enumerate_from(int k, std::int64_t remaining, Allocation& current,
                    const ProblemConfig& cfg,
                    const std::function<void(const Allocation&)>& fn) {
  if (k == cfg.num_resources()) {
    fn(current);
    return;
  }
  const int top = static_cast<int>(
      std::min<std::int64_t>(cfg.num_levels() - 1, remaining));
  for (int a = 0; a <= top; ++a) {
    current.levels[k] = a;
    enumerate_from(k + 1, remaining - a, current, cfg, fn);
  }
  current.levels[k] = 0;
}

}  // namespace

void for_each_feasible_allocation(
    const ProblemConfig& cfg, const std::function<void(const Allocation&)>& fn) {
  Allocation current = zero_allocation(cfg);
  enumerate_from(0, cfg.capacity_units(), current, cfg, fn);
}

}  // namespace resalloc
