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

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <sys/wait.h>

#include "resalloc/csv.hpp"
#include "resalloc/experiment.hpp"
#include "test_support.hpp"

namespace fs = std::filesystem;

namespace resalloc {
namespace {

using testing::Gen;

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("resalloc_test_" + name);
  fs::remove_all(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// Data lines of a CSV, without the leading "# key=value" lines.
std::vector<std::string> data_lines(const fs::path& p) {
  std::istringstream in(slurp(p));
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);) {
    if (!line.starts_with("#")) lines.push_back(line);
  }
  return lines;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream s(line);
  for (std::string f; std::getline(s, f, ',');) out.push_back(f);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

ExperimentConfig dra_config() {
  ExperimentConfig c;
  c.mode = Mode::kDra;
  c.num_resources = 2;
  c.budget = 2;
  c.num_levels = 3;
  c.reward.family = RewardFamily::kTable;
  c.reward.table = {{0.0, 0.5, 0.6}, {0.0, 0.3, 0.9}};
  c.horizons = {100, 1000, 10000};
  c.replications = 20;
  c.seed = 12345;
  c.curve_points = 100;
  return c;
}

const char* kDraJson = R"({
  "mode": "dra",
  "problem": {"K": 2, "Q": 2, "N": 3},
  "reward": {"family": "table", "table": [[0.0, 0.5, 0.6], [0.0, 0.3, 0.9]]},
  "horizons": [100, 1000, 10000],
  "replications": 20,
  "seed": 12345,
  "output": {"curve_points": 100}
})";

TEST(Config, ParsesDocumentedSchema) {
  EXPECT_EQ(parse_config(kDraJson), dra_config());
}

ExperimentConfig random_config(Gen& gen) {
  ExperimentConfig c;
  const int mode = gen.integer(0, 3);
  c.mode = static_cast<Mode>(mode);
  c.num_resources = gen.integer(1, 3);
  c.seed = (static_cast<std::uint64_t>(gen.integer(0, 1 << 30)) << 33) | gen.integer(0, 1000);
  c.replications = gen.integer(1, 50);
  c.curve_points = gen.integer(1, 2000);
  c.write_traces = gen.coin();
  c.output_dir = "out/" + std::to_string(gen.integer(0, 99));
  c.oracle_check_instances = gen.integer(1, 500);
  std::int64_t h = gen.integer(2, 50);
  for (int i = 0, n = gen.integer(1, 4); i < n; ++i) c.horizons.push_back(h *= gen.integer(2, 10));
  const int k = c.num_resources;
  if (c.mode == Mode::kCra) {
    c.budget = gen.uniform(0.1, 5.0);
    c.reward.family = gen.coin() ? RewardFamily::kHinge : RewardFamily::kConcaveExp;
    if (gen.coin()) c.lipschitz = gen.uniform(0.1, 3.0);
    c.max_levels = gen.integer(2, 5000);
    c.reference_refinement = gen.integer(2, 5000);
  } else {
    c.num_levels = gen.integer(1, 4);
    c.budget = gen.integer(c.num_levels - 1, 8);
    c.reward.family = RewardFamily::kTable;
  }
  c.smoothness = gen.uniform(0.5, 2.0);
  if (c.reward.family == RewardFamily::kTable) {
    c.reward.table.assign(k, {});
    for (auto& row : c.reward.table) {
      for (int a = 0; a < c.num_levels; ++a) row.push_back(gen.uniform());
    }
  } else {
    for (int i = 0; i < k; ++i) {
      c.reward.theta.push_back(gen.uniform(0.05, 1.0));
      if (c.reward.family == RewardFamily::kConcaveExp) c.reward.success_prob.push_back(gen.uniform());
    }
  }
  if (gen.coin()) {
    c.oracle = {OracleKind::kGreedy, gen.uniform(0.01, 1.0), gen.uniform(0.01, 1.0)};
  } else {
    c.oracle = {OracleKind::kExactDp, 1.0, gen.coin() ? 1.0 : gen.uniform(0.01, 1.0)};
  }
  return c;
}

TEST(Config, RoundTripsLosslessly) {
  Gen gen(71);
  for (int trial = 0; trial < 300; ++trial) {
    const ExperimentConfig c = random_config(gen);
    ASSERT_NO_THROW(validate_config(c)) << serialize_config(c);
    const std::string text = serialize_config(c);
    const ExperimentConfig back = parse_config(text);
    EXPECT_EQ(back, c) << text;
    EXPECT_EQ(serialize_config(back), text);
    EXPECT_EQ(config_hash(back), config_hash(c));
  }
}

TEST(Config, HashIgnoresOutputDirOnly) {
  ExperimentConfig a = dra_config();
  ExperimentConfig b = a;
  b.output_dir = "elsewhere";
  EXPECT_EQ(config_hash(a), config_hash(b));
  b.seed += 1;
  EXPECT_NE(config_hash(a), config_hash(b));
}

std::string error_of(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

TEST(Config, Diagnostics) {
  EXPECT_NE(error_of("{\n  \"mode\": \"dra\",\n  \"problem\": {\n}}}").find("line 4"),
            std::string::npos);
  EXPECT_NE(error_of(R"({"mode": "dra", "problm": {}})").find("'problm'"), std::string::npos);
  EXPECT_NE(error_of(R"({"problem": {}})").find("'mode'"), std::string::npos);
  EXPECT_NE(error_of(R"({"mode": "fast"})").find("'mode'"), std::string::npos);

  std::string bad = kDraJson;
  bad.replace(bad.find("\"replications\": 20"), 18, "\"replications\": 0");
  EXPECT_NE(error_of(bad).find("'replications'"), std::string::npos);

  bad = kDraJson;
  bad.replace(bad.find("[100, 1000, 10000]"), 18, "[100, 10000, 1000]");
  EXPECT_NE(error_of(bad).find("'horizons[2]'"), std::string::npos);

  bad = kDraJson;
  bad.replace(bad.find("0.9]"), 3, "1.9");
  EXPECT_NE(error_of(bad).find("'reward'"), std::string::npos);

  bad = kDraJson;
  bad.replace(bad.find("\"K\": 2"), 6, "\"K\": \"2\"");
  EXPECT_NE(error_of(bad).find("'problem.K'"), std::string::npos);

  bad = kDraJson;
  bad.replace(bad.find("\"N\": 3"), 6, "\"N\": 4");
  EXPECT_NE(error_of(bad).find("reward.table"), std::string::npos);
}

TEST(Config, CraRejectsTable) {
  ExperimentConfig c = dra_config();
  c.mode = Mode::kCra;
  EXPECT_THROW(validate_config(c), ConfigError);
}

TEST(Run, ZeroReplicationsFailsBeforeWriting) {
  ExperimentConfig c = dra_config();
  c.replications = 0;
  c.output_dir = scratch("zero_reps").string();
  EXPECT_THROW(run_experiment(c), ConfigError);
  EXPECT_FALSE(fs::exists(c.output_dir));
}

TEST(Run, DraStructure) {
  ExperimentConfig c = dra_config();
  c.output_dir = scratch("dra_structure").string();
  const auto files = run_experiment(c);
  const auto aggregate = data_lines(fs::path(c.output_dir) / "aggregate.csv");
  ASSERT_EQ(aggregate.size(), 4u);
  EXPECT_EQ(aggregate[0],
            "horizon,mean_regret,std_regret,theorem1_dep_bound,theorem1_indep_bound,"
            "theorem2_normalized,epsilon,N,lemma1_violations");
  const auto curve = data_lines(fs::path(c.output_dir) / "curve_T10000.csv");
  EXPECT_EQ(curve[0], "round,mean_cum_regret,std_cum_regret");
  EXPECT_EQ(curve.size(), 101u);
  EXPECT_EQ(split(curve.back())[0], "10000");
  for (std::size_t i = 1; i < aggregate.size(); ++i) {
    const auto fields = split(aggregate[i]);
    ASSERT_EQ(fields.size(), 9u);
    EXPECT_FALSE(fields[3].empty());
    EXPECT_TRUE(fields[5].empty());
    EXPECT_TRUE(fields[6].empty());
  }
}

TEST(Run, MeanRegretMatchesReplications) {
  const auto result = execute_experiment(dra_config());
  ASSERT_EQ(result.rows.size(), 3u);
  for (const auto& row : result.rows) {
    ASSERT_EQ(row.final_regrets.size(), 20u);
    double sum = 0.0;
    for (double r : row.final_regrets) sum += r;
    EXPECT_NEAR(row.mean_regret, sum / 20.0, 1e-9);
  }
}

TEST(Run, PrefixHorizonsMatchSeparateRuns) {
  ExperimentConfig all = dra_config();
  all.replications = 3;
  const auto joint = execute_experiment(all);
  for (std::size_t i = 0; i < all.horizons.size(); ++i) {
    ExperimentConfig one = all;
    one.horizons = {all.horizons[i]};
    const auto alone = execute_experiment(one);
    EXPECT_EQ(alone.rows[0].final_regrets, joint.rows[i].final_regrets);
  }
}

TEST(Stats, PermutationInvariant) {
  Gen gen(72);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> v(gen.integer(1, 40));
    for (double& x : v) x = gen.uniform(-1e3, 1e3);
    std::vector<double> w = v;
    std::shuffle(w.begin(), w.end(), std::mt19937_64(trial));
    EXPECT_EQ(sample_mean(v), sample_mean(w));
    EXPECT_EQ(sample_std(v), sample_std(w));
  }
  EXPECT_EQ(sample_std({4.0}), 0.0);
  EXPECT_NEAR(sample_std({1.0, 2.0, 3.0, 4.0}), std::sqrt(5.0 / 3.0), 1e-15);
}

TEST(Run, FlatMeansLeaveDependentBoundBlank) {
  ExperimentConfig c = dra_config();
  c.reward.table = {{0.4, 0.4, 0.4}, {0.4, 0.4, 0.4}};
  c.replications = 2;
  c.output_dir = scratch("flat").string();
  run_experiment(c);
  const auto lines = data_lines(fs::path(c.output_dir) / "aggregate.csv");
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto f = split(lines[i]);
    EXPECT_TRUE(f[3].empty());
    EXPECT_FALSE(f[4].empty());
    EXPECT_EQ(f[1], "0");
  }
}

ExperimentConfig cra_example() {
  ExperimentConfig c;
  c.mode = Mode::kCra;
  c.num_resources = 4;
  c.budget = 2.0;
  c.smoothness = 1.0;
  c.lipschitz = 2.0;
  c.reward.family = RewardFamily::kConcaveExp;
  c.reward.success_prob = {0.9, 0.7, 0.5, 0.3};
  c.reward.theta = {0.5, 0.6, 0.8, 1.0};
  c.horizons = {10000};
  c.replications = 1;
  c.reference_refinement = 200;
  c.curve_points = 10;
  return c;
}

TEST(Run, CraHeaderRecordsPlan) {
  ExperimentConfig c = cra_example();
  c.output_dir = scratch("cra_header").string();
  run_experiment(c);
  const std::string text = slurp(fs::path(c.output_dir) / "aggregate.csv");
  const std::string key = "# T10000.epsilon_star=";
  const auto pos = text.find(key);
  ASSERT_NE(pos, std::string::npos);
  const double eps = std::stod(text.substr(pos + key.size()));
  EXPECT_NEAR(eps, 0.06131, 5e-5);
  EXPECT_NE(text.find("# T10000.N=34\n"), std::string::npos);

  const auto lines = data_lines(fs::path(c.output_dir) / "aggregate.csv");
  const auto f = split(lines[1]);
  EXPECT_FALSE(f[5].empty());
  EXPECT_EQ(std::stod(f[6]), 2.0 / 33.0);
  EXPECT_TRUE(fs::exists(fs::path(c.output_dir) / "decomposition.csv"));
}

TEST(Run, CraRowDecomposition) {
  ExperimentConfig c = cra_example();
  c.num_resources = 2;
  c.reward.success_prob = {0.9, 0.6};
  c.reward.theta = {0.5, 1.0};
  c.horizons = {500, 5000};
  c.replications = 4;
  const auto result = execute_experiment(c);
  for (const auto& row : result.rows) {
    EXPECT_NEAR(*row.mean_learning_term + *row.discretization_term, row.mean_regret,
                1e-8 * row.horizon);
    EXPECT_LE(*row.opt_grid, *result.opt_reference_hi);
  }
}

void expect_same_tree(const fs::path& a, const fs::path& b) {
  std::vector<std::string> names;
  for (const auto& e : fs::directory_iterator(a)) names.push_back(e.path().filename().string());
  std::size_t count_b = 0;
  for ([[maybe_unused]] const auto& e : fs::directory_iterator(b)) ++count_b;
  ASSERT_EQ(names.size(), count_b);
  for (const auto& n : names) EXPECT_EQ(slurp(a / n), slurp(b / n)) << n;
}

TEST(Run, DeterministicAndJobsInvariant) {
  ExperimentConfig c = dra_config();
  c.oracle = {OracleKind::kGreedy, 0.8, 0.9};
  c.write_traces = true;
  c.horizons = {50, 500};
  c.replications = 6;
  const fs::path a = scratch("det_a"), b = scratch("det_b"), j = scratch("det_jobs");
  emit_csv(execute_experiment(c, 1), a);
  emit_csv(execute_experiment(c, 1), b);
  emit_csv(execute_experiment(c, 4), j);
  expect_same_tree(a, b);
  expect_same_tree(a, j);
  EXPECT_TRUE(fs::exists(a / "trace_T500_rep5.csv"));
  const auto trace = data_lines(a / "trace_T500_rep5.csv");
  EXPECT_EQ(trace[0], "round,level_1,level_2,reward_1,reward_2,expected_reward,"
                      "cumulative_expected_reward");
  EXPECT_EQ(trace.size(), 501u);
}

TEST(Run, AddingReplicationsKeepsEarlierOnes) {
  ExperimentConfig c = dra_config();
  c.replications = 3;
  const auto small = execute_experiment(c);
  c.replications = 5;
  const auto large = execute_experiment(c);
  for (std::size_t i = 0; i < small.rows.size(); ++i) {
    for (int r = 0; r < 3; ++r) {
      EXPECT_EQ(small.rows[i].final_regrets[r], large.rows[i].final_regrets[r]);
    }
  }
}

TEST(OracleCheck, ReportsExactPassAndAlpha) {
  const auto report = run_oracle_check(200, 0);
  EXPECT_TRUE(report.exact_pass);
  EXPECT_GT(report.greedy_alpha, 0.0);
  EXPECT_LE(report.greedy_alpha, 1.0);
  const std::string s = report.summary();
  EXPECT_TRUE(s.starts_with("exact: PASS"));
  EXPECT_NE(s.find("greedy empirical alpha = "), std::string::npos);
  for (const auto& inst : report.instances) {
    EXPECT_LE(inst.num_resources, 4);
    EXPECT_LE(inst.num_levels, 5);
    EXPECT_LE(inst.budget, 8);
  }
}

TEST(Bounds, ModeWritesBoundsAndGaps) {
  ExperimentConfig c = dra_config();
  c.mode = Mode::kBounds;
  c.output_dir = scratch("bounds").string();
  run_experiment(c);
  const auto lines = data_lines(fs::path(c.output_dir) / "bounds.csv");
  ASSERT_EQ(lines.size(), 4u);
  EXPECT_EQ(data_lines(fs::path(c.output_dir) / "gaps.csv").size(), 7u);
}

TEST(Bounds, HugeInstanceIsEnumerationInfeasible) {
  ExperimentConfig c;
  c.mode = Mode::kBounds;
  c.num_resources = 8;
  c.num_levels = 8;
  c.budget = 20;
  c.reward.family = RewardFamily::kHinge;
  c.reward.theta.assign(8, 0.5);
  c.horizons = {100};
  // Hinge on integer levels needs Q >= top level; 7 <= 20.
  EXPECT_THROW(execute_experiment(c), EnumerationInfeasible);
}

TEST(Csv, FormattingIsLocaleFreeAndRoundTrips) {
  Gen gen(73);
  for (int i = 0; i < 1000; ++i) {
    const double x = gen.uniform(-1e6, 1e6) * std::pow(10.0, gen.integer(-20, 20));
    const std::string s = format_double(x);
    EXPECT_EQ(s.find(','), std::string::npos);
    EXPECT_EQ(std::stod(s), x);
  }
  EXPECT_EQ(format_double(0.5), "0.5");
  EXPECT_EQ(format_optional(std::nullopt), "");
  EXPECT_EQ(csv_escape("a,b"), "\"a,b\"");
  EXPECT_EQ(csv_escape("say \"hi\""), "\"say \"\"hi\"\"\"");
  EXPECT_EQ(csv_escape("plain"), "plain");
}

#ifdef CUCB_SIM_PATH
int run_cli(const std::string& args) {
  const std::string cmd = std::string(CUCB_SIM_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

TEST(Cli, ExitCodes) {
  const fs::path dir = scratch("cli");
  fs::create_directories(dir);
  {
    std::ofstream(dir / "good.json") << kDraJson;
    std::ofstream(dir / "bad.json") << "{\"mode\": ";
    std::ofstream(dir / "huge.json") << R"({"mode": "bounds", "problem": {"K": 8, "Q": 20, "N": 8},
      "reward": {"family": "hinge", "theta": [0.5,0.5,0.5,0.5,0.5,0.5,0.5,0.5]}, "horizons": [10]})";
  }
  const std::string out = " --out " + (dir / "out").string();
  EXPECT_EQ(run_cli("run --config " + (dir / "good.json").string() + out + " --jobs 2"), 0);
  EXPECT_EQ(run_cli("run --config " + (dir / "bad.json").string() + out), 1);
  EXPECT_EQ(run_cli("run --config " + (dir / "missing.json").string() + out), 1);
  EXPECT_EQ(run_cli("run"), 1);
  EXPECT_EQ(run_cli("bounds --config " + (dir / "huge.json").string() + out), 2);
  EXPECT_EQ(run_cli("oracle-check --instances 20" + out), 0);
  EXPECT_TRUE(fs::exists(dir / "out" / "oracle_check.csv"));
}

TEST(Cli, SeedOverride) {
  const fs::path dir = scratch("cli_seed");
  fs::create_directories(dir);
  std::ofstream(dir / "good.json") << kDraJson;
  const std::string cfg = " --config " + (dir / "good.json").string();
  ASSERT_EQ(run_cli("run" + cfg + " --out " + (dir / "a").string() + " --seed 99"), 0);
  ASSERT_EQ(run_cli("run" + cfg + " --out " + (dir / "b").string() + " --seed 99"), 0);
  ASSERT_EQ(run_cli("run" + cfg + " --out " + (dir / "c").string()), 0);
  EXPECT_EQ(slurp(dir / "a" / "aggregate.csv"), slurp(dir / "b" / "aggregate.csv"));
  EXPECT_NE(slurp(dir / "a" / "aggregate.csv"), slurp(dir / "c" / "aggregate.csv"));
  EXPECT_NE(slurp(dir / "a" / "aggregate.csv").find("# seed=99\n"), std::string::npos);
}
#endif

}  // namespace
}  // namespace resalloc
