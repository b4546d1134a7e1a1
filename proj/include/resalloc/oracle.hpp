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

#ifndef RESALLOC_ORACLE_HPP_
#define RESALLOC_ORACLE_HPP_

#include <cstdint>
#include <memory>

#include "resalloc/core.hpp"

namespace resalloc {

enum class OracleKind { kExactDp, kGreedy };

// Declared guarantee of an offline solver: with probability `beta` it
// returns an allocation worth at least `alpha` times the optimum.
struct OracleSpec {
  OracleKind kind = OracleKind::kExactDp;
  double alpha = 1.0;
  double beta = 1.0;

  void validate() const;
  bool operator==(const OracleSpec&) const = default;
};

struct OracleResult {
  Allocation allocation;
  double value = 0.0;
};

// Multiple-choice knapsack over resources x budget units. Among optimal
// allocations it returns the one with the smallest budget, then the
// lexicographically smallest level vector.
OracleResult solve_exact_dp(const MeanMatrix& means, const ProblemConfig& cfg);

// Best-ratio upgrade heuristic: from all zeros, repeatedly raise one resource
// to the level with the largest gain per extra budget unit, while some
// affordable upgrade has positive gain. Ties go to the lowest resource, then
// the lowest target level.
OracleResult solve_greedy(const MeanMatrix& means, const ProblemConfig& cfg);

class Oracle {
 public:
  virtual ~Oracle() = default;

  virtual OracleResult solve(const MeanMatrix& means,
                             const ProblemConfig& cfg) = 0;
  virtual const OracleSpec& spec() const = 0;
};

// Builds the oracle described by `spec`. When beta < 1 the solver is wrapped
// with a Bernoulli(beta) coin keyed on (coin_seed, call number); a failed
// coin yields the all-zeros allocation.
std::unique_ptr<Oracle> make_oracle(const OracleSpec& spec,
                                    std::uint64_t coin_seed = 0);

}  // namespace resalloc

#endif  // RESALLOC_ORACLE_HPP_
