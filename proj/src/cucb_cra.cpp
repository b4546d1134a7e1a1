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

#include "resalloc/cucb_cra.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace resalloc {

DiscretizationPlan plan_discretization(double smoothness, double budget,
                                       double lipschitz, int num_resources,
                                       std::int64_t horizon, int max_levels) {
  auto positive = [](double x) { return std::isfinite(x) && x > 0.0; };
  if (!positive(smoothness)) throw ConfigError("B must be positive");
  if (!positive(budget)) throw ConfigError("Q must be positive");
  if (!positive(lipschitz)) throw ConfigError("L must be positive");
  if (num_resources < 1) throw ConfigError("K must be >= 1");
  if (horizon < 2) throw ConfigError("discretization needs T >= 2 so that ln T > 0");
  if (max_levels < 2) throw ConfigError("max_levels must be >= 2");

  const double log_t = std::log(static_cast<double>(horizon));
  const double ratio = (smoothness * smoothness * budget * budget * log_t) /
                       (lipschitz * lipschitz * num_resources *
                        static_cast<double>(horizon));

  DiscretizationPlan plan;
  plan.max_levels = max_levels;
  plan.epsilon_star = std::min(std::cbrt(ratio), budget);
  double intervals = std::max(1.0, std::ceil(budget / plan.epsilon_star));
  // Rounding in the division can leave Q / intervals an ulp above epsilon*.
  while (budget / intervals > plan.epsilon_star) intervals += 1.0;
  if (intervals + 1.0 > static_cast<double>(max_levels)) {
    plan.num_levels = max_levels;
    plan.capped = true;
  } else {
    plan.num_levels = static_cast<int>(intervals) + 1;
  }
  plan.epsilon = budget / (plan.num_levels - 1);
  plan.grid = ActionSpace::Grid(plan.num_levels, plan.epsilon);
  return plan;
}

ProblemConfig grid_problem(const DiscretizationPlan& plan, double budget,
                           int num_resources) {
  return ProblemConfig(num_resources, budget, plan.grid);
}

CraRun run_cra(const RewardModel& model, Oracle& oracle, const CraParams& params,
               const RunOptions& options) {
  if (model.family() == RewardFamily::kTable) {
    throw UnsupportedError("CUCB-CRA needs a continuous reward family, not table");
  }
  if (model.num_resources() != params.num_resources) {
    throw ShapeError("reward model has " + std::to_string(model.num_resources()) +
                     " resources, K = " + std::to_string(params.num_resources));
  }
  const double lipschitz = params.lipschitz.value_or(lipschitz_constant(model));
  DiscretizationPlan plan =
      plan_discretization(params.smoothness, params.budget, lipschitz,
                          params.num_resources, params.horizon, params.max_levels);
  ProblemConfig cfg = grid_problem(plan, params.budget, params.num_resources);
  Environment env(model, cfg);
  RunTrace trace = run_dra(env, oracle, params.horizon, options);
  return CraRun{std::move(plan), lipschitz, std::move(cfg), std::move(trace)};
}

}  // namespace resalloc
