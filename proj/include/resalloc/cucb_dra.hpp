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

#ifndef RESALLOC_CUCB_DRA_HPP_
#define RESALLOC_CUCB_DRA_HPP_

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "resalloc/core.hpp"
#include "resalloc/environment.hpp"
#include "resalloc/oracle.hpp"

namespace resalloc {

// Per-arm play counts and empirical means: the learner's entire state.
class ArmStats {
 public:
  explicit ArmStats(const ProblemConfig& cfg);

  const ArmTable<std::int64_t>& counts() const { return counts_; }
  const MeanMatrix& means() const { return means_; }
  // Completed rounds.
  std::int64_t rounds() const { return rounds_; }

  // Folds one round of semi-bandit feedback into the statistics. Throws
  // ContractViolation if any reward lies outside [0, 1].
  void update(const Allocation& alloc, std::span<const double> rewards);

 private:
  ArmTable<std::int64_t> counts_;
  MeanMatrix means_;
  std::int64_t rounds_ = 0;
};

// Optimistic indices. Untried arms carry an infinite radius and an index of
// exactly 1, the largest possible mean.
struct UcbVector {
  MeanMatrix index;
  MeanMatrix radius;
};

double confidence_radius(std::int64_t count, std::int64_t round);
UcbVector compute_ucb(const ArmStats& stats, std::int64_t round);

Allocation select_allocation(const ArmStats& stats, std::int64_t round,
                             Oracle& oracle, const ProblemConfig& cfg);

// Per-round log of one run. Feedback arrays are stored flat, K per round.
class RunTrace {
 public:
  RunTrace() = default;
  explicit RunTrace(int num_resources) : num_resources_(num_resources) {}

  void reserve(std::int64_t rounds);
  void append(const Allocation& alloc, std::span<const double> rewards,
              double expected_reward);

  std::int64_t length() const { return static_cast<std::int64_t>(expected_.size()); }
  int num_resources() const { return num_resources_; }

  // Accessors take the 1-based round index.
  std::span<const int> levels(std::int64_t round) const;
  std::span<const double> rewards(std::int64_t round) const;
  double expected_reward(std::int64_t round) const { return expected_.at(round - 1); }
  double cumulative_expected_reward(std::int64_t round) const {
    return cumulative_.at(round - 1);
  }
  std::span<const double> expected_rewards() const { return expected_; }

  // Optional learner snapshots taken at the start of each round.
  struct Snapshot {
    std::vector<std::int64_t> counts;
    std::vector<double> means;
  };
  const std::vector<Snapshot>& snapshots() const { return snapshots_; }
  void add_snapshot(const ArmStats& stats);

 private:
  int num_resources_ = 0;
  std::vector<int> levels_;
  std::vector<double> rewards_;
  std::vector<double> expected_;
  std::vector<double> cumulative_;
  std::vector<Snapshot> snapshots_;
};

// Called at the start of round t, before the oracle, with the statistics of
// rounds 1..t-1 and the indices built from them.
using RoundObserver =
    std::function<void(std::int64_t round, const ArmStats&, const UcbVector&)>;

struct RunOptions {
  bool record_snapshots = false;
  RoundObserver observer;
};

// Combinatorial UCB learner over base arms (k, a). Sees only feedback.
class CucbDra {
 public:
  CucbDra(ProblemConfig cfg, Oracle& oracle);

  // Next round's allocation; does not advance state.
  Allocation select() const;
  UcbVector current_ucb() const { return compute_ucb(stats_, next_round()); }
  void observe(const Allocation& alloc, std::span<const double> rewards);

  std::int64_t next_round() const { return stats_.rounds() + 1; }
  const ArmStats& stats() const { return stats_; }
  const ProblemConfig& config() const { return cfg_; }

 private:
  ProblemConfig cfg_;
  Oracle* oracle_;
  ArmStats stats_;
};

// Runs `horizon` rounds of select -> sample -> update. The environment's true
// means fill the trace's expected-reward column; the learner never sees them.
RunTrace run_dra(const Environment& env, Oracle& oracle, std::int64_t horizon,
                 const RunOptions& options = {});

}  // namespace resalloc

#endif  // RESALLOC_CUCB_DRA_HPP_
