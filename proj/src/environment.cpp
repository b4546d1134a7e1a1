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

#include "resalloc/environment.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "resalloc/rng.hpp"

namespace resalloc {

const char* family_name(RewardFamily family) {
  switch (family) {
    case RewardFamily::kTable:
      return "table";
    case RewardFamily::kHinge:
      return "hinge";
    case RewardFamily::kConcaveExp:
      return "concave_exp";
  }
  return "unknown";
}

namespace {

void check_probability(double p, const char* what) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw ConfigError(std::string(what) + " must lie in [0, 1]");
  }
}

}  // namespace

RewardModel RewardModel::Table(MeanMatrix success_prob, std::uint64_t seed) {
  if (success_prob.num_resources() < 1 || success_prob.num_levels() < 1) {
    throw ConfigError("table reward needs a non-empty K x N matrix");
  }
  for (double p : success_prob.flat()) check_probability(p, "table probability");
  RewardModel model;
  model.family_ = RewardFamily::kTable;
  model.table_ = std::move(success_prob);
  model.seed_ = seed;
  return model;
}

RewardModel RewardModel::Hinge(std::vector<double> theta, double budget,
                               std::uint64_t seed) {
  if (theta.empty()) throw ConfigError("hinge reward needs theta per resource");
  for (double t : theta) {
    if (!(t > 0.0 && t <= 1.0)) throw ConfigError("hinge theta must lie in (0, 1]");
  }
  if (!(std::isfinite(budget) && budget > 0.0)) {
    throw ConfigError("hinge reward needs a positive budget Q");
  }
  RewardModel model;
  model.family_ = RewardFamily::kHinge;
  model.theta_ = std::move(theta);
  model.budget_ = budget;
  model.seed_ = seed;
  return model;
}

RewardModel RewardModel::ConcaveExp(std::vector<double> success_prob,
                                    std::vector<double> theta,
                                    std::uint64_t seed) {
  if (theta.empty() || success_prob.size() != theta.size()) {
    throw ConfigError("concave_exp reward needs matching p and theta per resource");
  }
  for (double p : success_prob) check_probability(p, "concave_exp p");
  for (double t : theta) {
    if (!(std::isfinite(t) && t > 0.0)) throw ConfigError("concave_exp theta must be > 0");
  }
  RewardModel model;
  model.family_ = RewardFamily::kConcaveExp;
  model.success_prob_ = std::move(success_prob);
  model.theta_ = std::move(theta);
  model.seed_ = seed;
  return model;
}

int RewardModel::num_resources() const {
  return family_ == RewardFamily::kTable ? table_.num_resources()
                                         : static_cast<int>(theta_.size());
}

RewardModel RewardModel::with_seed(std::uint64_t seed) const {
  RewardModel copy = *this;
  copy.seed_ = seed;
  return copy;
}

double RewardModel::draw_noise(int k, std::int64_t round) const {
  const double u = uniform01(seed_, Stream::kReward, static_cast<std::uint64_t>(k),
                             static_cast<std::uint64_t>(round));
  switch (family_) {
    case RewardFamily::kTable:
      return u;
    case RewardFamily::kHinge:
      return u * theta_[k] * budget_;
    case RewardFamily::kConcaveExp:
      return u < success_prob_[k] ? 1.0 : 0.0;
  }
  return 0.0;
}

double RewardModel::reward(int k, double value, double noise) const {
  switch (family_) {
    case RewardFamily::kTable:
      throw UnsupportedError("table rewards are keyed by level, not by value");
    case RewardFamily::kHinge: {
      // Grid endpoints can overshoot Q by an ulp.
      const double v = std::min(value, budget_);
      return std::max(v - noise, 0.0) / budget_;
    }
    case RewardFamily::kConcaveExp:
      return noise * -std::expm1(-value / theta_[k]);
  }
  return 0.0;
}

double RewardModel::mean_at(int k, double value) const {
  switch (family_) {
    case RewardFamily::kTable:
      throw UnsupportedError("table family has no continuous mean");
    case RewardFamily::kHinge: {
      const double v = std::min(value, budget_);
      const double upper = theta_[k] * budget_;
      const double expected =
          v <= upper ? v * v / (2.0 * upper) : v - upper / 2.0;
      return expected / budget_;
    }
    case RewardFamily::kConcaveExp:
      return success_prob_[k] * -std::expm1(-value / theta_[k]);
  }
  return 0.0;
}

namespace {

void check_arm(const RewardModel& model, ArmId arm, const ActionSpace& space) {
  if (model.family() == RewardFamily::kTable) {
    if (space.kind() != SpaceKind::kDiscrete) {
      throw ConfigError("table rewards require a discrete action space");
    }
    if (space.num_levels() != model.table().num_levels()) {
      throw ShapeError("table has " + std::to_string(model.table().num_levels()) +
                       " levels, action space has " +
                       std::to_string(space.num_levels()));
    }
  }
  if (arm.resource < 0 || arm.resource >= model.num_resources() ||
      arm.level < 0 || arm.level >= space.num_levels()) {
    throw RangeError("arm out of range for reward model");
  }
}

}  // namespace

double sample_reward(const RewardModel& model, ArmId arm,
                     const ActionSpace& space, std::int64_t round) {
  check_arm(model, arm, space);
  if (round < 1) throw ContractViolation("rounds are numbered from 1");
  const double noise = model.draw_noise(arm.resource, round);
  if (model.family() == RewardFamily::kTable) {
    return noise < model.table()(arm.resource, arm.level) ? 1.0 : 0.0;
  }
  return model.reward(arm.resource, space.value(arm.level), noise);
}

double true_mean(const RewardModel& model, ArmId arm, const ActionSpace& space) {
  check_arm(model, arm, space);
  if (model.family() == RewardFamily::kTable) {
    return model.table()(arm.resource, arm.level);
  }
  return model.mean_at(arm.resource, space.value(arm.level));
}

double lipschitz_constant(const RewardModel& model) {
  switch (model.family()) {
    case RewardFamily::kTable:
      throw UnsupportedError("table family has no continuum to be Lipschitz over");
    case RewardFamily::kHinge:
      return 1.0 / model.budget();
    case RewardFamily::kConcaveExp: {
      double worst = 0.0;
      for (double t : model.theta()) worst = std::max(worst, 1.0 / t);
      return worst;
    }
  }
  return 0.0;
}

Environment::Environment(RewardModel model, ProblemConfig cfg)
    : model_(std::move(model)), cfg_(std::move(cfg)) {
  if (model_.num_resources() != cfg_.num_resources()) {
    throw ShapeError("reward model has " + std::to_string(model_.num_resources()) +
                     " resources, instance has K = " +
                     std::to_string(cfg_.num_resources()));
  }
  if (model_.family() == RewardFamily::kTable) {
    check_arm(model_, {0, 0}, cfg_.space());
  }
  if (model_.family() == RewardFamily::kHinge) {
    const double top = cfg_.space().value(cfg_.num_levels() - 1);
    if (top > model_.budget() + kBudgetTolerance) {
      throw ConfigError("hinge rewards need every level value <= Q");
    }
  }
}

double Environment::observe(ArmId arm, std::int64_t round) const {
  return sample_reward(model_, arm, cfg_.space(), round);
}

MeanMatrix Environment::true_means() const {
  MeanMatrix means(cfg_.num_resources(), cfg_.num_levels());
  for (int k = 0; k < cfg_.num_resources(); ++k) {
    for (int a = 0; a < cfg_.num_levels(); ++a) {
      means(k, a) = true_mean(model_, {k, a}, cfg_.space());
    }
  }
  return means;
}

}  // namespace resalloc
