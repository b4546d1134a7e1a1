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

#ifndef RESALLOC_ENVIRONMENT_HPP_
#define RESALLOC_ENVIRONMENT_HPP_

#include <cstdint>
#include <vector>

#include "resalloc/core.hpp"

namespace resalloc {

enum class RewardFamily {
  kTable,       // Bernoulli(p[k][a]) per base arm; discrete spaces only
  kHinge,       // max(v - X, 0) / Q with X ~ Uniform[0, theta_k * Q]
  kConcaveExp,  // X * (1 - exp(-v / theta_k)) with X ~ Bernoulli(p_k)
};

const char* family_name(RewardFamily family);

// Reward family f_k and noise law D_k for every resource. All realizable
// rewards lie in [0, 1].
class RewardModel {
 public:
  static RewardModel Table(MeanMatrix success_prob, std::uint64_t seed);
  static RewardModel Hinge(std::vector<double> theta, double budget,
                           std::uint64_t seed);
  static RewardModel ConcaveExp(std::vector<double> success_prob,
                                std::vector<double> theta, std::uint64_t seed);

  RewardFamily family() const { return family_; }
  int num_resources() const;
  std::uint64_t seed() const { return seed_; }
  RewardModel with_seed(std::uint64_t seed) const;

  const MeanMatrix& table() const { return table_; }
  const std::vector<double>& theta() const { return theta_; }
  const std::vector<double>& success_prob() const { return success_prob_; }
  double budget() const { return budget_; }

  // f_k(v, X) for a realized noise draw produced by `draw_noise`.
  double reward(int k, double value, double noise) const;
  // X_{k,t}, a pure function of (seed, k, round).
  double draw_noise(int k, std::int64_t round) const;
  // Closed-form E[f_k(v, X_k)] for the continuous families.
  double mean_at(int k, double value) const;

 private:
  RewardModel() = default;

  RewardFamily family_ = RewardFamily::kTable;
  MeanMatrix table_;
  std::vector<double> theta_;
  std::vector<double> success_prob_;
  double budget_ = 0.0;
  std::uint64_t seed_ = 0;
};

// For the table family the noise is the uniform variate itself and the
// reward is 1{U < p[k][a]}, so all levels of resource k share one draw.
double sample_reward(const RewardModel& model, ArmId arm,
                     const ActionSpace& space, std::int64_t round);
double true_mean(const RewardModel& model, ArmId arm, const ActionSpace& space);
double lipschitz_constant(const RewardModel& model);

// What a learner is allowed to see: one realized reward per played arm.
class FeedbackSource {
 public:
  virtual ~FeedbackSource() = default;
  virtual double observe(ArmId arm, std::int64_t round) const = 0;
};

// A reward model bound to an instance. The feedback facet is what learners
// consume; true means are for benchmarking and analysis only.
class Environment final : public FeedbackSource {
 public:
  Environment(RewardModel model, ProblemConfig cfg);

  double observe(ArmId arm, std::int64_t round) const override;

  const ProblemConfig& config() const { return cfg_; }
  const RewardModel& model() const { return model_; }
  MeanMatrix true_means() const;

 private:
  RewardModel model_;
  ProblemConfig cfg_;
};

}  // namespace resalloc

#endif  // RESALLOC_ENVIRONMENT_HPP_
