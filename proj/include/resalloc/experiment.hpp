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

#ifndef RESALLOC_EXPERIMENT_HPP_
#define RESALLOC_EXPERIMENT_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "resalloc/core.hpp"
#include "resalloc/cucb_dra.hpp"
#include "resalloc/environment.hpp"
#include "resalloc/oracle.hpp"

namespace resalloc {

enum class Mode { kDra, kCra, kOracleCheck, kBounds };

const char* mode_name(Mode mode);

struct RewardSpec {
  RewardFamily family = RewardFamily::kTable;
  std::vector<std::vector<double>> table;  // table: K rows of N probabilities
  std::vector<double> success_prob;        // concave_exp: p_k
  std::vector<double> theta;               // hinge, concave_exp

  bool operator==(const RewardSpec&) const = default;
};

// One experiment, as stored in its JSON config file. See README for the
// schema.
struct ExperimentConfig {
  Mode mode = Mode::kDra;

  int num_resources = 1;              // problem.K
  double budget = 1.0;                // problem.Q
  int num_levels = 0;                 // problem.N (dra, bounds)
  double smoothness = 1.0;            // problem.B
  std::optional<double> lipschitz;    // problem.L, overrides the model's
  int max_levels = 4096;              // problem.N_max (cra)
  int reference_refinement = 2000;    // problem.reference_refinement (cra)

  RewardSpec reward;
  OracleSpec oracle;

  std::vector<std::int64_t> horizons;
  int replications = 1;
  std::uint64_t seed = 0;

  std::string output_dir = "results";
  bool write_traces = false;
  int curve_points = 1000;

  int oracle_check_instances = 200;

  bool operator==(const ExperimentConfig&) const = default;
};

// Throws ConfigError naming the offending line (syntax) or field (schema).
ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::filesystem::path& path);
// Canonical JSON text; parse_config(serialize_config(c)) == c.
std::string serialize_config(const ExperimentConfig& config);
// FNV-1a of the canonical text with the output directory blanked, so the
// hash only depends on what is computed.
std::uint64_t config_hash(const ExperimentConfig& config);

// Semantic checks shared by the parser and programmatic callers.
void validate_config(const ExperimentConfig& config);

RewardModel build_reward_model(const ExperimentConfig& config, std::uint64_t seed);
// Discrete instance for dra/bounds modes.
ProblemConfig build_problem(const ExperimentConfig& config);

struct AggregateRow {
  std::int64_t horizon = 0;
  double mean_regret = 0.0;
  double std_regret = 0.0;
  std::optional<double> theorem1_dep_bound;
  std::optional<double> theorem1_indep_bound;
  std::optional<double> theorem2_normalized;
  std::optional<double> epsilon;
  int num_levels = 0;
  double lemma1_violations = 0.0;  // mean over replications
  std::vector<double> final_regrets;  // per replication, by index

  // Continuous-budget runs.
  std::optional<double> epsilon_star;
  bool capped = false;
  std::optional<double> mean_learning_term;
  std::optional<double> discretization_term;
  std::optional<double> opt_grid;
};

struct CurvePoint {
  std::int64_t round = 0;
  double mean = 0.0;
  double std = 0.0;
};

struct RegretCurve {
  std::int64_t horizon = 0;
  std::vector<CurvePoint> points;
};

struct ReplicationTrace {
  std::int64_t horizon = 0;
  int replication = 0;
  std::uint64_t seed = 0;
  RunTrace trace;
};

struct OracleCheckInstance {
  int num_resources = 0;
  int num_levels = 0;
  double budget = 0.0;
  double exact_value = 0.0;
  double enumerated_value = 0.0;
  double greedy_value = 0.0;
};

struct OracleCheckReport {
  std::vector<OracleCheckInstance> instances;
  bool exact_pass = true;
  double greedy_alpha = 1.0;  // min greedy/exact over instances with exact > 0

  std::string summary() const;
};

struct GapArmRow {
  int resource = 0;
  int level = 0;
  double delta_min = 0.0;
  double delta_max = 0.0;
};

struct BoundsRow {
  std::int64_t horizon = 0;
  std::optional<double> dependent;
  double independent = 0.0;
};

struct ExperimentResult {
  ExperimentConfig config;
  std::uint64_t hash = 0;
  std::optional<double> opt;  // dra: exact optimum of true means
  std::optional<double> opt_reference_lo;
  std::optional<double> opt_reference_hi;
  std::optional<double> lipschitz;
  std::optional<double> delta_min;
  std::optional<double> delta_max;
  std::vector<AggregateRow> rows;
  std::vector<RegretCurve> curves;
  std::vector<ReplicationTrace> traces;
  std::optional<OracleCheckReport> oracle_check;
  std::vector<GapArmRow> gap_arms;
  std::vector<BoundsRow> bounds;
  std::vector<std::string> warnings;
};

// Runs every (horizon, replication) pair; `jobs` threads share the
// replications. Results never depend on `jobs`.
ExperimentResult execute_experiment(const ExperimentConfig& config, int jobs = 1);

OracleCheckReport run_oracle_check(int instances, std::uint64_t seed);

// Writes the CSV files for `result` into `dir` (created if missing) and
// returns their paths.
std::vector<std::filesystem::path> emit_csv(const ExperimentResult& result,
                                            const std::filesystem::path& dir);

// execute_experiment + emit_csv into config.output_dir.
std::vector<std::filesystem::path> run_experiment(const ExperimentConfig& config,
                                                  int jobs = 1);

double sample_mean(std::vector<double> values);
double sample_std(std::vector<double> values);

}  // namespace resalloc

#endif  // RESALLOC_EXPERIMENT_HPP_
