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

#include "resalloc/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "resalloc/rng.hpp"

namespace resalloc {

void OracleSpec::validate() const {
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw ConfigError("oracle alpha must lie in (0, 1]");
  }
  if (!(beta > 0.0 && beta <= 1.0)) {
    throw ConfigError("oracle beta must lie in (0, 1]");
  }
  if (kind == OracleKind::kExactDp && alpha != 1.0) {
    throw ConfigError("exact DP oracle has alpha = 1");
  }
}

namespace {

void check_means(const MeanMatrix& means, const ProblemConfig& cfg) {
  check_shape(means, cfg);
  for (double m : means.flat()) {
    if (!std::isfinite(m)) throw NumericError("mean matrix has a non-finite entry");
  }
}

constexpr double kUnreachable = -std::numeric_limits<double>::infinity();

}  // namespace

OracleResult solve_exact_dp(const MeanMatrix& means, const ProblemConfig& cfg) {
  check_means(means, cfg);
  const int num_resources = cfg.num_resources();
  const int num_levels = cfg.num_levels();
  const auto capacity = static_cast<std::size_t>(cfg.capacity_units());
  const std::size_t width = capacity + 1;

  // best[k * width + c]: top value of resources k..K-1 using exactly c units.
  std::vector<double> best((num_resources + 1) * width, kUnreachable);
  best[num_resources * width] = 0.0;
  for (int k = num_resources - 1; k >= 0; --k) {
    const double* next = best.data() + (k + 1) * width;
    double* here = best.data() + k * width;
    for (std::size_t c = 0; c <= capacity; ++c) {
      const std::size_t top = std::min<std::size_t>(num_levels - 1, c);
      double value = kUnreachable;
      for (std::size_t a = 0; a <= top; ++a) {
        const double tail = next[c - a];
        if (tail == kUnreachable) continue;
        const double candidate = means(k, static_cast<int>(a)) + tail;
        if (candidate > value) value = candidate;
      }
      here[c] = value;
    }
  }

  std::size_t used = 0;
  for (std::size_t c = 1; c <= capacity; ++c) {
    if (best[c] > best[used]) used = c;
  }

  OracleResult result;
  result.value = best[used];
  result.allocation.levels.assign(num_resources, 0);
  for (int k = 0; k < num_resources; ++k) {
    const double* next = best.data() + (k + 1) * width;
    const double target = best[k * width + used];
    const std::size_t top = std::min<std::size_t>(num_levels - 1, used);
    for (std::size_t a = 0; a <= top; ++a) {
      const double tail = next[used - a];
      if (tail != kUnreachable && means(k, static_cast<int>(a)) + tail == target) {
        result.allocation.levels[k] = static_cast<int>(a);
        used -= a;
        break;
      }
    }
  }
  return result;
}

OracleResult solve_greedy(const MeanMatrix& means, const ProblemConfig& cfg) {
  check_means(means, cfg);
  const std::int64_t capacity = cfg.capacity_units();
  Allocation alloc = zero_allocation(cfg);
  std::int64_t used = 0;

  while (true) {
    int best_k = -1;
    int best_level = -1;
    double best_ratio = 0.0;
    for (int k = 0; k < cfg.num_resources(); ++k) {
      const int current = alloc.levels[k];
      for (int a = current + 1; a < cfg.num_levels(); ++a) {
        const int extra = a - current;
        if (used + extra > capacity) break;
        const double gain = means(k, a) - means(k, current);
        if (gain <= 0.0) continue;
        const double ratio = gain / extra;
        if (best_k < 0 || ratio > best_ratio) {
          best_k = k;
          best_level = a;
          best_ratio = ratio;
        }
      }
    }
    if (best_k < 0) break;
    used += best_level - alloc.levels[best_k];
    alloc.levels[best_k] = best_level;
  }
  return {alloc, allocation_value(alloc, means)};
}

namespace {

class SolverOracle final : public Oracle {
 public:
  explicit SolverOracle(OracleSpec spec) : spec_(spec) {}

  OracleResult solve(const MeanMatrix& means, const ProblemConfig& cfg) override {
    return spec_.kind == OracleKind::kExactDp ? solve_exact_dp(means, cfg)
                                              : solve_greedy(means, cfg);
  }
  const OracleSpec& spec() const override { return spec_; }

 private:
  OracleSpec spec_;
};

class CoinFlipOracle final : public Oracle {
 public:
  CoinFlipOracle(OracleSpec spec, std::uint64_t seed)
      : inner_(spec), spec_(spec), seed_(seed) {}

  OracleResult solve(const MeanMatrix& means, const ProblemConfig& cfg) override {
    const double coin = uniform01(seed_, Stream::kOracleCoin, calls_++, 0);
    if (coin < spec_.beta) return inner_.solve(means, cfg);
    check_means(means, cfg);
    Allocation zeros = zero_allocation(cfg);
    const double value = allocation_value(zeros, means);
    return {std::move(zeros), value};
  }
  const OracleSpec& spec() const override { return spec_; }

 private:
  SolverOracle inner_;
  OracleSpec spec_;
  std::uint64_t seed_;
  std::uint64_t calls_ = 0;
};

}  // namespace

std::unique_ptr<Oracle> make_oracle(const OracleSpec& spec,
                                    std::uint64_t coin_seed) {
  spec.validate();
  if (spec.beta < 1.0) return std::make_unique<CoinFlipOracle>(spec, coin_seed);
  return std::make_unique<SolverOracle>(spec);
}

}  // namespace resalloc
