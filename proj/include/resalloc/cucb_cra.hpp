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

#ifndef RESALLOC_CUCB_CRA_HPP_
#define RESALLOC_CUCB_CRA_HPP_

#include <cstdint>
#include <optional>

#include "resalloc/core.hpp"
#include "resalloc/cucb_dra.hpp"
#include "resalloc/environment.hpp"
#include "resalloc/oracle.hpp"

namespace resalloc {

inline constexpr int kDefaultMaxLevels = 4096;

// Uniform grid for a continuous budget [0, Q].
struct DiscretizationPlan {
  double epsilon_star = 0.0;  // horizon-optimized pitch, clamped to Q
  double epsilon = 0.0;       // realized pitch Q / (N - 1)
  int num_levels = 0;
  bool capped = false;        // N hit max_levels, so epsilon > epsilon_star
  int max_levels = kDefaultMaxLevels;
  ActionSpace grid = ActionSpace::Discrete(1);
};

// epsilon* = (B^2 Q^2 ln T / (L^2 K T))^(1/3). N is rounded up so the grid is
// never coarser than epsilon*, unless that would exceed `max_levels`.
DiscretizationPlan plan_discretization(double smoothness, double budget,
                                       double lipschitz, int num_resources,
                                       std::int64_t horizon,
                                       int max_levels = kDefaultMaxLevels);

struct CraParams {
  double smoothness = 1.0;  // B
  double budget = 1.0;      // Q
  int num_resources = 1;    // K
  std::int64_t horizon = 2; // T
  std::optional<double> lipschitz;  // defaults to the model's certified L
  int max_levels = kDefaultMaxLevels;
};

struct CraRun {
  DiscretizationPlan plan;
  double lipschitz = 0.0;
  ProblemConfig grid_config;
  RunTrace trace;
};

// Instance on the plan's grid.
ProblemConfig grid_problem(const DiscretizationPlan& plan, double budget,
                           int num_resources);

// Plans the grid and runs the discrete learner on it for `params.horizon`
// rounds. Table models are rejected.
CraRun run_cra(const RewardModel& model, Oracle& oracle, const CraParams& params,
               const RunOptions& options = {});

}  // namespace resalloc

#endif  // RESALLOC_CUCB_CRA_HPP_
