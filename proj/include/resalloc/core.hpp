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

#ifndef RESALLOC_CORE_HPP_
#define RESALLOC_CORE_HPP_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "resalloc/errors.hpp"

namespace resalloc {

// Absolute slack on budget sums over discretized-continuous grids.
inline constexpr double kBudgetTolerance = 1e-9;

enum class SpaceKind {
  kDiscrete,  // native integer levels: value(i) = i
  kGrid,      // uniform grid over [0, Q]: value(i) = i * pitch
};

// The per-resource action set, shared by every resource. Always a uniform
// ladder starting at zero, so levels double as integer budget units.
class ActionSpace {
 public:
  static ActionSpace Discrete(int num_levels);
  static ActionSpace Grid(int num_levels, double pitch);

  int num_levels() const { return num_levels_; }
  double pitch() const { return pitch_; }
  SpaceKind kind() const { return kind_; }

  double value(int level) const;
  std::vector<double> level_values() const;

  bool operator==(const ActionSpace&) const = default;

 private:
  ActionSpace(SpaceKind kind, int num_levels, double pitch)
      : kind_(kind), num_levels_(num_levels), pitch_(pitch) {}

  SpaceKind kind_;
  int num_levels_;
  double pitch_;
};

// One resource allocation instance: K resources sharing budget Q.
class ProblemConfig {
 public:
  ProblemConfig(int num_resources, double budget, ActionSpace space);

  int num_resources() const { return num_resources_; }
  double budget() const { return budget_; }
  const ActionSpace& space() const { return space_; }
  int num_levels() const { return space_.num_levels(); }
  int num_arms() const { return num_resources_ * space_.num_levels(); }

  // Budget expressed in level units (the knapsack capacity).
  std::int64_t capacity_units() const;

 private:
  int num_resources_;
  double budget_;
  ActionSpace space_;
};

// Base arm (k, a): give level `level` to resource `resource`. Both indices
// are zero-based.
struct ArmId {
  int resource = 0;
  int level = 0;

  bool operator==(const ArmId&) const = default;
};

int arm_index(ArmId arm, const ProblemConfig& cfg);
ArmId arm_from_index(int index, const ProblemConfig& cfg);

// K x N table keyed by base arm, row-major by resource.
template <typename T>
class ArmTable {
 public:
  ArmTable() = default;
  ArmTable(int num_resources, int num_levels, T fill = T{})
      : num_resources_(num_resources),
        num_levels_(num_levels),
        data_(static_cast<std::size_t>(num_resources) * num_levels, fill) {}

  int num_resources() const { return num_resources_; }
  int num_levels() const { return num_levels_; }
  std::size_t size() const { return data_.size(); }

  T& operator()(int k, int a) { return data_[offset(k, a)]; }
  const T& operator()(int k, int a) const { return data_[offset(k, a)]; }

  std::span<T> row(int k) {
    return {data_.data() + offset(k, 0), static_cast<std::size_t>(num_levels_)};
  }
  std::span<const T> row(int k) const {
    return {data_.data() + offset(k, 0), static_cast<std::size_t>(num_levels_)};
  }

  std::span<const T> flat() const { return data_; }
  std::span<T> flat() { return data_; }

  bool operator==(const ArmTable&) const = default;

 private:
  std::size_t offset(int k, int a) const {
    return static_cast<std::size_t>(k) * num_levels_ + a;
  }

  int num_resources_ = 0;
  int num_levels_ = 0;
  std::vector<T> data_;
};

using MeanMatrix = ArmTable<double>;

// Level index per resource.
struct Allocation {
  std::vector<int> levels;

  bool operator==(const Allocation&) const = default;
};

Allocation zero_allocation(const ProblemConfig& cfg);

// Sum of level indices, i.e. budget consumed in level units.
std::int64_t budget_units(const Allocation& alloc, const ProblemConfig& cfg);
double budget_used(const Allocation& alloc, const ProblemConfig& cfg);

bool is_feasible(const Allocation& alloc, const ProblemConfig& cfg);

// Objective sum_k means(k, levels[k]). Accumulated from the last resource to
// the first; the exact DP folds in the same order, so values compare exactly.
double allocation_value(const Allocation& alloc, const MeanMatrix& means);

// Throws ShapeError unless `means` is K x N for `cfg`.
void check_shape(const MeanMatrix& means, const ProblemConfig& cfg);

// Visits every feasible allocation in lexicographic order of level vectors.
void for_each_feasible_allocation(
    const ProblemConfig& cfg, const std::function<void(const Allocation&)>& fn);

}  // namespace resalloc

#endif  // RESALLOC_CORE_HPP_
