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

#include "resalloc/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <functional>
#include <mutex>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "resalloc/analysis.hpp"
#include "resalloc/csv.hpp"
#include "resalloc/cucb_cra.hpp"
#include "resalloc/rng.hpp"

namespace resalloc {

using nlohmann::json;

const char* mode_name(Mode mode) {
  switch (mode) {
    case Mode::kDra:
      return "dra";
    case Mode::kCra:
      return "cra";
    case Mode::kOracleCheck:
      return "oracle-check";
    case Mode::kBounds:
      return "bounds";
  }
  return "unknown";
}

// -- Config file ---------------------------------------------------------------

namespace {

[[noreturn]] void field_error(const std::string& path, const std::string& what) {
  throw ConfigError("config field '" + path + "': " + what);
}

std::string join(const std::string& prefix, const std::string& key) {
  return prefix.empty() ? key : prefix + "." + key;
}

void check_keys(const json& obj, const std::string& path,
                std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) field_error(path.empty() ? "<root>" : path, "expected an object");
  for (const auto& item : obj.items()) {
    const bool known = std::any_of(allowed.begin(), allowed.end(),
                                   [&](const char* k) { return item.key() == k; });
    if (!known) field_error(join(path, item.key()), "unknown field");
  }
}

const json* find(const json& obj, const char* key) {
  const auto it = obj.find(key);
  return it == obj.end() ? nullptr : &*it;
}

double read_number(const json& value, const std::string& path) {
  if (!value.is_number()) field_error(path, "expected a number");
  const double x = value.get<double>();
  if (!std::isfinite(x)) field_error(path, "expected a finite number");
  return x;
}

std::int64_t read_integer(const json& value, const std::string& path) {
  if (value.is_number_integer()) return value.get<std::int64_t>();
  if (value.is_number_float()) {
    const double x = value.get<double>();
    if (std::isfinite(x) && x == std::floor(x) && std::abs(x) < 9.0e15) {
      return static_cast<std::int64_t>(x);
    }
  }
  field_error(path, "expected an integer");
}

int read_int(const json& value, const std::string& path) {
  const std::int64_t x = read_integer(value, path);
  if (x < std::numeric_limits<int>::min() || x > std::numeric_limits<int>::max()) {
    field_error(path, "integer out of range");
  }
  return static_cast<int>(x);
}

std::vector<double> read_vector(const json& value, const std::string& path) {
  if (!value.is_array()) field_error(path, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < value.size(); ++i) {
    out.push_back(read_number(value[i], path + "[" + std::to_string(i) + "]"));
  }
  return out;
}

Mode parse_mode(const json& value) {
  if (!value.is_string()) field_error("mode", "expected a string");
  const auto s = value.get<std::string>();
  if (s == "dra") return Mode::kDra;
  if (s == "cra") return Mode::kCra;
  if (s == "oracle-check") return Mode::kOracleCheck;
  if (s == "bounds") return Mode::kBounds;
  field_error("mode", "expected one of dra, cra, oracle-check, bounds (got '" + s + "')");
}

RewardFamily parse_family(const json& value) {
  if (!value.is_string()) field_error("reward.family", "expected a string");
  const auto s = value.get<std::string>();
  if (s == "table") return RewardFamily::kTable;
  if (s == "hinge") return RewardFamily::kHinge;
  if (s == "concave_exp") return RewardFamily::kConcaveExp;
  field_error("reward.family", "expected one of table, hinge, concave_exp (got '" + s + "')");
}

OracleKind parse_kind(const json& value) {
  if (!value.is_string()) field_error("oracle.kind", "expected a string");
  const auto s = value.get<std::string>();
  if (s == "exact_dp") return OracleKind::kExactDp;
  if (s == "greedy") return OracleKind::kGreedy;
  field_error("oracle.kind", "expected exact_dp or greedy (got '" + s + "')");
}

ExperimentConfig config_from_json(const json& root) {
  check_keys(root, "", {"mode", "problem", "reward", "oracle", "horizons",
                        "replications", "seed", "output", "oracle_check"});
  ExperimentConfig cfg;
  const json* mode = find(root, "mode");
  if (!mode) field_error("mode", "required");
  cfg.mode = parse_mode(*mode);

  if (const json* problem = find(root, "problem")) {
    check_keys(*problem, "problem",
               {"K", "Q", "N", "B", "L", "N_max", "reference_refinement"});
    if (const json* v = find(*problem, "K")) cfg.num_resources = read_int(*v, "problem.K");
    if (const json* v = find(*problem, "Q")) cfg.budget = read_number(*v, "problem.Q");
    if (const json* v = find(*problem, "N")) cfg.num_levels = read_int(*v, "problem.N");
    if (const json* v = find(*problem, "B")) cfg.smoothness = read_number(*v, "problem.B");
    if (const json* v = find(*problem, "L"); v && !v->is_null()) {
      cfg.lipschitz = read_number(*v, "problem.L");
    }
    if (const json* v = find(*problem, "N_max")) cfg.max_levels = read_int(*v, "problem.N_max");
    if (const json* v = find(*problem, "reference_refinement")) {
      cfg.reference_refinement = read_int(*v, "problem.reference_refinement");
    }
  } else if (cfg.mode != Mode::kOracleCheck) {
    field_error("problem", "required");
  }

  if (const json* reward = find(root, "reward")) {
    check_keys(*reward, "reward", {"family", "table", "p", "theta"});
    const json* family = find(*reward, "family");
    if (!family) field_error("reward.family", "required");
    cfg.reward.family = parse_family(*family);
    if (const json* t = find(*reward, "table")) {
      if (!t->is_array()) field_error("reward.table", "expected an array of rows");
      for (std::size_t i = 0; i < t->size(); ++i) {
        cfg.reward.table.push_back(
            read_vector((*t)[i], "reward.table[" + std::to_string(i) + "]"));
      }
    }
    if (const json* p = find(*reward, "p")) cfg.reward.success_prob = read_vector(*p, "reward.p");
    if (const json* th = find(*reward, "theta")) cfg.reward.theta = read_vector(*th, "reward.theta");
  } else if (cfg.mode != Mode::kOracleCheck) {
    field_error("reward", "required");
  }

  if (const json* oracle = find(root, "oracle")) {
    check_keys(*oracle, "oracle", {"kind", "alpha", "beta"});
    if (const json* v = find(*oracle, "kind")) cfg.oracle.kind = parse_kind(*v);
    if (const json* v = find(*oracle, "alpha")) cfg.oracle.alpha = read_number(*v, "oracle.alpha");
    if (const json* v = find(*oracle, "beta")) cfg.oracle.beta = read_number(*v, "oracle.beta");
  }

  if (const json* h = find(root, "horizons")) {
    if (!h->is_array()) field_error("horizons", "expected an array of integers");
    for (std::size_t i = 0; i < h->size(); ++i) {
      cfg.horizons.push_back(read_integer((*h)[i], "horizons[" + std::to_string(i) + "]"));
    }
  }
  if (const json* v = find(root, "replications")) cfg.replications = read_int(*v, "replications");
  if (const json* v = find(root, "seed")) {
    if (!v->is_number_unsigned() && !(v->is_number_integer() && v->get<std::int64_t>() >= 0)) {
      field_error("seed", "expected an unsigned 64-bit integer");
    }
    cfg.seed = v->get<std::uint64_t>();
  }
  if (const json* out = find(root, "output")) {
    check_keys(*out, "output", {"dir", "traces", "curve_points"});
    if (const json* v = find(*out, "dir")) {
      if (!v->is_string()) field_error("output.dir", "expected a string");
      cfg.output_dir = v->get<std::string>();
    }
    if (const json* v = find(*out, "traces")) {
      if (!v->is_boolean()) field_error("output.traces", "expected true or false");
      cfg.write_traces = v->get<bool>();
    }
    if (const json* v = find(*out, "curve_points")) {
      cfg.curve_points = read_int(*v, "output.curve_points");
    }
  }
  if (const json* oc = find(root, "oracle_check")) {
    check_keys(*oc, "oracle_check", {"instances"});
    if (const json* v = find(*oc, "instances")) {
      cfg.oracle_check_instances = read_int(*v, "oracle_check.instances");
    }
  }
  return cfg;
}

json config_to_json(const ExperimentConfig& cfg) {
  json root;
  root["mode"] = mode_name(cfg.mode);
  root["problem"] = {{"K", cfg.num_resources},
                     {"Q", cfg.budget},
                     {"N", cfg.num_levels},
                     {"B", cfg.smoothness},
                     {"L", cfg.lipschitz ? json(*cfg.lipschitz) : json(nullptr)},
                     {"N_max", cfg.max_levels},
                     {"reference_refinement", cfg.reference_refinement}};
  json reward = {{"family", family_name(cfg.reward.family)}};
  if (!cfg.reward.table.empty()) reward["table"] = cfg.reward.table;
  if (!cfg.reward.success_prob.empty()) reward["p"] = cfg.reward.success_prob;
  if (!cfg.reward.theta.empty()) reward["theta"] = cfg.reward.theta;
  root["reward"] = reward;
  root["oracle"] = {{"kind", cfg.oracle.kind == OracleKind::kExactDp ? "exact_dp" : "greedy"},
                    {"alpha", cfg.oracle.alpha},
                    {"beta", cfg.oracle.beta}};
  root["horizons"] = cfg.horizons;
  root["replications"] = cfg.replications;
  root["seed"] = cfg.seed;
  root["output"] = {{"dir", cfg.output_dir},
                    {"traces", cfg.write_traces},
                    {"curve_points", cfg.curve_points}};
  root["oracle_check"] = {{"instances", cfg.oracle_check_instances}};
  return root;
}

}  // namespace

void validate_config(const ExperimentConfig& cfg) {
  try {
    if (cfg.mode == Mode::kOracleCheck) {
      if (cfg.oracle_check_instances < 1) {
        field_error("oracle_check.instances", "must be >= 1");
      }
      return;
    }
    if (cfg.num_resources < 1) field_error("problem.K", "must be >= 1");
    if (!(cfg.budget >= 0.0)) field_error("problem.Q", "must be >= 0");
    if (cfg.horizons.empty()) field_error("horizons", "must list at least one horizon");
    for (std::size_t i = 0; i < cfg.horizons.size(); ++i) {
      const auto path = "horizons[" + std::to_string(i) + "]";
      if (cfg.horizons[i] < (cfg.mode == Mode::kCra ? 2 : 1)) {
        field_error(path, cfg.mode == Mode::kCra ? "must be >= 2" : "must be >= 1");
      }
      if (i > 0 && cfg.horizons[i] <= cfg.horizons[i - 1]) {
        field_error(path, "horizons must be strictly increasing");
      }
    }
    if (cfg.replications < 1) field_error("replications", "must be >= 1");
    if (cfg.curve_points < 1) field_error("output.curve_points", "must be >= 1");
    try {
      cfg.oracle.validate();
    } catch (const ConfigError& e) {
      field_error("oracle", e.what());
    }

    const int k = cfg.num_resources;
    const auto& reward = cfg.reward;
    switch (reward.family) {
      case RewardFamily::kTable:
        if (static_cast<int>(reward.table.size()) != k) {
          field_error("reward.table", "needs K = " + std::to_string(k) + " rows");
        }
        for (std::size_t i = 0; i < reward.table.size(); ++i) {
          if (static_cast<int>(reward.table[i].size()) != cfg.num_levels) {
            field_error("reward.table[" + std::to_string(i) + "]",
                        "needs N = " + std::to_string(cfg.num_levels) + " entries");
          }
        }
        break;
      case RewardFamily::kHinge:
        if (static_cast<int>(reward.theta.size()) != k) {
          field_error("reward.theta", "needs K = " + std::to_string(k) + " entries");
        }
        break;
      case RewardFamily::kConcaveExp:
        if (static_cast<int>(reward.theta.size()) != k) {
          field_error("reward.theta", "needs K = " + std::to_string(k) + " entries");
        }
        if (static_cast<int>(reward.success_prob.size()) != k) {
          field_error("reward.p", "needs K = " + std::to_string(k) + " entries");
        }
        break;
    }
    try {
      build_reward_model(cfg, 0);
    } catch (const std::invalid_argument& e) {
      field_error("reward", e.what());
    }

    if (cfg.mode == Mode::kCra) {
      if (reward.family == RewardFamily::kTable) {
        field_error("reward.family", "cra mode needs hinge or concave_exp");
      }
      if (!(cfg.budget > 0.0)) field_error("problem.Q", "cra mode needs Q > 0");
      if (!(cfg.smoothness > 0.0)) field_error("problem.B", "must be > 0");
      if (cfg.lipschitz && !(*cfg.lipschitz > 0.0)) field_error("problem.L", "must be > 0");
      if (cfg.max_levels < 2) field_error("problem.N_max", "must be >= 2");
      if (cfg.reference_refinement < 2) {
        field_error("problem.reference_refinement", "must be >= 2");
      }
      return;
    }
    if (cfg.num_levels < 1) field_error("problem.N", "must be >= 1");
    if (!(cfg.smoothness > 0.0)) field_error("problem.B", "must be > 0");
    try {
      Environment env(build_reward_model(cfg, 0), build_problem(cfg));
    } catch (const std::invalid_argument& e) {
      field_error("problem", e.what());
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
}

ExperimentConfig parse_config(std::string_view text) {
  json root;
  try {
    root = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    const std::size_t byte = std::min<std::size_t>(e.byte, text.size());
    const auto line = 1 + std::count(text.begin(), text.begin() + byte, '\n');
    throw ConfigError("config line " + std::to_string(line) + ": syntax error: " + e.what());
  }
  ExperimentConfig cfg = config_from_json(root);
  validate_config(cfg);
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

std::string serialize_config(const ExperimentConfig& config) {
  return config_to_json(config).dump(2) + "\n";
}

std::uint64_t config_hash(const ExperimentConfig& config) {
  ExperimentConfig canonical = config;
  canonical.output_dir.clear();
  const std::string text = config_to_json(canonical).dump();
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

RewardModel build_reward_model(const ExperimentConfig& config, std::uint64_t seed) {
  const auto& reward = config.reward;
  switch (reward.family) {
    case RewardFamily::kTable: {
      const int rows = static_cast<int>(reward.table.size());
      const int cols = rows ? static_cast<int>(reward.table.front().size()) : 0;
      MeanMatrix p(rows, cols);
      for (int k = 0; k < rows; ++k) {
        if (static_cast<int>(reward.table[k].size()) != cols) {
          throw ShapeError("table rows differ in length");
        }
        for (int a = 0; a < cols; ++a) p(k, a) = reward.table[k][a];
      }
      return RewardModel::Table(std::move(p), seed);
    }
    case RewardFamily::kHinge:
      return RewardModel::Hinge(reward.theta, config.budget, seed);
    case RewardFamily::kConcaveExp:
      return RewardModel::ConcaveExp(reward.success_prob, reward.theta, seed);
  }
  throw ConfigError("unknown reward family");
}

ProblemConfig build_problem(const ExperimentConfig& config) {
  return ProblemConfig(config.num_resources, config.budget,
                       ActionSpace::Discrete(config.num_levels));
}

// -- Statistics ----------------------------------------------------------------

double sample_mean(std::vector<double> values) {
  if (values.empty()) return 0.0;
  // Sorted summation keeps the result independent of input order.
  std::sort(values.begin(), values.end());
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

double sample_std(std::vector<double> values) {
  if (values.size() < 2) return 0.0;
  const double mean = sample_mean(values);
  std::vector<double> squares;
  squares.reserve(values.size());
  for (double v : values) squares.push_back((v - mean) * (v - mean));
  std::sort(squares.begin(), squares.end());
  double sum = 0.0;
  for (double s : squares) sum += s;
  return std::sqrt(sum / static_cast<double>(values.size() - 1));
}

// -- Execution -----------------------------------------------------------------

namespace {

// Runs fn(0..n-1) on up to `jobs` threads. The first exception wins.
void parallel_for(int n, int jobs, const std::function<void(int)>& fn) {
  const int workers = std::max(1, std::min(jobs, n));
  if (workers == 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      while (true) {
        const int i = next.fetch_add(1);
        if (i >= n) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(failure_mutex);
          if (!failure) failure = std::current_exception();
          next.store(n);
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

std::vector<std::int64_t> curve_rounds(std::int64_t horizon, int points) {
  std::vector<std::int64_t> rounds;
  if (horizon <= points) {
    for (std::int64_t t = 1; t <= horizon; ++t) rounds.push_back(t);
    return rounds;
  }
  for (int i = 1; i <= points; ++i) {
    const std::int64_t t = (static_cast<std::int64_t>(i) * horizon + points - 1) / points;
    if (rounds.empty() || t > rounds.back()) rounds.push_back(t);
  }
  return rounds;
}

RegretCurve build_curve(std::int64_t horizon, int points,
                        const std::vector<std::vector<double>>& series) {
  RegretCurve curve;
  curve.horizon = horizon;
  std::vector<double> column(series.size());
  for (std::int64_t t : curve_rounds(horizon, points)) {
    for (std::size_t r = 0; r < series.size(); ++r) column[r] = series[r][t - 1];
    curve.points.push_back({t, sample_mean(column), sample_std(column)});
  }
  return curve;
}

struct ReplicationOutcome {
  std::vector<double> cumulative;
  std::vector<bool> violated;
  double learning_term = 0.0;
  std::optional<RunTrace> trace;
};

void execute_dra(const ExperimentConfig& cfg, int jobs, ExperimentResult& result) {
  const ProblemConfig problem = build_problem(cfg);
  const MeanMatrix truth = Environment(build_reward_model(cfg, 0), problem).true_means();
  const double opt = solve_exact_dp(truth, problem).value;
  result.opt = opt;

  std::optional<GapReport> gaps;
  try {
    gaps = compute_gaps(truth, problem, cfg.oracle.alpha);
    result.delta_min = gaps->delta_min;
    result.delta_max = gaps->delta_max;
  } catch (const EnumerationInfeasible& e) {
    result.warnings.push_back(std::string(e.what()) + "; bound columns left blank");
  }

  const std::int64_t horizon = cfg.horizons.back();
  std::vector<ReplicationOutcome> outcomes(cfg.replications);
  parallel_for(cfg.replications, jobs, [&](int r) {
    const std::uint64_t seed = replication_seed(cfg.seed, static_cast<std::uint64_t>(r));
    Environment env(build_reward_model(cfg, seed), problem);
    auto oracle = make_oracle(cfg.oracle, seed);
    Lemma1Monitor monitor(truth);
    RunOptions options;
    options.observer = monitor.observer();
    RunTrace trace = run_dra(env, *oracle, horizon, options);
    auto& out = outcomes[r];
    out.cumulative =
        regret_series(trace, opt, cfg.oracle.alpha, cfg.oracle.beta).cumulative;
    out.violated = monitor.report().violated;
    if (cfg.write_traces) out.trace = std::move(trace);
  });

  const BoundParams params{cfg.smoothness, 1.0, cfg.oracle.alpha, cfg.oracle.beta};
  for (std::int64_t h : cfg.horizons) {
    AggregateRow row;
    row.horizon = h;
    row.num_levels = cfg.num_levels;
    std::vector<double> violations;
    for (const auto& out : outcomes) {
      row.final_regrets.push_back(out.cumulative[h - 1]);
      violations.push_back(static_cast<double>(
          std::count(out.violated.begin(), out.violated.begin() + h, true)));
    }
    row.mean_regret = sample_mean(row.final_regrets);
    row.std_regret = sample_std(row.final_regrets);
    row.lemma1_violations = sample_mean(violations);
    if (gaps) {
      if (gaps->has_positive_gap()) {
        row.theorem1_dep_bound = theorem1_dependent_bound(
            *gaps, params, cfg.budget, cfg.num_resources, cfg.num_levels, h);
      }
      row.theorem1_indep_bound = theorem1_independent_bound(
          params, cfg.budget, cfg.num_resources, cfg.num_levels, h, gaps->delta_max);
    }
    result.rows.push_back(std::move(row));
  }

  std::vector<std::vector<double>> series;
  for (auto& out : outcomes) series.push_back(std::move(out.cumulative));
  result.curves.push_back(build_curve(horizon, cfg.curve_points, series));
  if (cfg.write_traces) {
    for (int r = 0; r < cfg.replications; ++r) {
      result.traces.push_back({horizon, r, replication_seed(cfg.seed, r),
                               std::move(*outcomes[r].trace)});
    }
  }
}

void execute_cra(const ExperimentConfig& cfg, int jobs, ExperimentResult& result) {
  const RewardModel base = build_reward_model(cfg, 0);
  const double lipschitz = cfg.lipschitz.value_or(lipschitz_constant(base));
  result.lipschitz = lipschitz;
  const OptInterval reference = compute_opt_continuous_reference(
      base, cfg.budget, cfg.num_resources, cfg.reference_refinement, lipschitz);
  result.opt_reference_lo = reference.lo;
  result.opt_reference_hi = reference.hi;

  for (std::int64_t h : cfg.horizons) {
    CraParams params;
    params.smoothness = cfg.smoothness;
    params.budget = cfg.budget;
    params.num_resources = cfg.num_resources;
    params.horizon = h;
    params.lipschitz = lipschitz;
    params.max_levels = cfg.max_levels;

    const DiscretizationPlan plan = plan_discretization(
        cfg.smoothness, cfg.budget, lipschitz, cfg.num_resources, h, cfg.max_levels);
    if (plan.capped) {
      result.warnings.push_back("horizon " + std::to_string(h) + ": grid capped at N_max = " +
                                std::to_string(plan.max_levels) + " (epsilon " +
                                format_double(plan.epsilon) + " > epsilon* " +
                                format_double(plan.epsilon_star) + ")");
    }
    const ProblemConfig grid = grid_problem(plan, cfg.budget, cfg.num_resources);
    const MeanMatrix truth = Environment(base, grid).true_means();
    const double opt_grid = solve_exact_dp(truth, grid).value;

    std::vector<ReplicationOutcome> outcomes(cfg.replications);
    parallel_for(cfg.replications, jobs, [&](int r) {
      const std::uint64_t seed = replication_seed(cfg.seed, static_cast<std::uint64_t>(r));
      auto oracle = make_oracle(cfg.oracle, seed);
      Lemma1Monitor monitor(truth);
      RunOptions options;
      options.observer = monitor.observer();
      CraRun run = run_cra(base.with_seed(seed), *oracle, params, options);
      const RegretReport report = regret_series_cra(run.trace, opt_grid, reference.hi,
                                                    cfg.oracle.alpha, cfg.oracle.beta);
      auto& out = outcomes[r];
      out.cumulative = report.cumulative;
      out.learning_term = *report.learning_term;
      out.violated = monitor.report().violated;
      if (cfg.write_traces) out.trace = std::move(run.trace);
    });

    AggregateRow row;
    row.horizon = h;
    row.num_levels = plan.num_levels;
    row.epsilon = plan.epsilon;
    row.epsilon_star = plan.epsilon_star;
    row.capped = plan.capped;
    row.opt_grid = opt_grid;
    std::vector<double> violations;
    std::vector<double> learning;
    for (const auto& out : outcomes) {
      row.final_regrets.push_back(out.cumulative.back());
      learning.push_back(out.learning_term);
      violations.push_back(
          static_cast<double>(std::count(out.violated.begin(), out.violated.end(), true)));
    }
    row.mean_regret = sample_mean(row.final_regrets);
    row.std_regret = sample_std(row.final_regrets);
    row.lemma1_violations = sample_mean(violations);
    row.theorem2_normalized = row.mean_regret / theorem2_rate(h);
    row.mean_learning_term = sample_mean(learning);
    row.discretization_term = static_cast<double>(h) * cfg.oracle.alpha * cfg.oracle.beta *
                              (reference.hi - opt_grid);
    result.rows.push_back(std::move(row));

    std::vector<std::vector<double>> series;
    for (auto& out : outcomes) series.push_back(std::move(out.cumulative));
    result.curves.push_back(build_curve(h, cfg.curve_points, series));
    if (cfg.write_traces) {
      for (int r = 0; r < cfg.replications; ++r) {
        result.traces.push_back({h, r, replication_seed(cfg.seed, r),
                                 std::move(*outcomes[r].trace)});
      }
    }
  }
}

void execute_bounds(const ExperimentConfig& cfg, ExperimentResult& result) {
  const ProblemConfig problem = build_problem(cfg);
  const MeanMatrix truth = Environment(build_reward_model(cfg, 0), problem).true_means();
  const GapReport gaps = compute_gaps(truth, problem, cfg.oracle.alpha);
  result.opt = gaps.opt;
  result.delta_min = gaps.delta_min;
  result.delta_max = gaps.delta_max;
  for (int k = 0; k < cfg.num_resources; ++k) {
    for (int a = 0; a < cfg.num_levels; ++a) {
      result.gap_arms.push_back(
          {k, a, gaps.delta_min_per_arm(k, a), gaps.delta_max_per_arm(k, a)});
    }
  }
  const BoundParams params{cfg.smoothness, 1.0, cfg.oracle.alpha, cfg.oracle.beta};
  for (std::int64_t h : cfg.horizons) {
    BoundsRow row;
    row.horizon = h;
    if (gaps.has_positive_gap()) {
      row.dependent = theorem1_dependent_bound(gaps, params, cfg.budget,
                                               cfg.num_resources, cfg.num_levels, h);
    }
    row.independent = theorem1_independent_bound(params, cfg.budget, cfg.num_resources,
                                                 cfg.num_levels, h, gaps.delta_max);
    result.bounds.push_back(row);
  }
  if (!gaps.has_positive_gap()) {
    result.warnings.push_back("no allocation has a positive gap; dependent bound inapplicable");
  }
}

}  // namespace

OracleCheckReport run_oracle_check(int instances, std::uint64_t seed) {
  if (instances < 1) throw ConfigError("oracle check needs at least one instance");
  OracleCheckReport report;
  double worst_ratio = 1.0;
  for (int i = 0; i < instances; ++i) {
    std::uint64_t draw = 0;
    auto next = [&] {
      return uniform01(seed, Stream::kInstance, static_cast<std::uint64_t>(i), draw++);
    };
    const int k = 1 + static_cast<int>(next() * 4.0);
    const int q = static_cast<int>(next() * 9.0);
    const int n = 1 + static_cast<int>(next() * std::min(5, q + 1));
    ProblemConfig cfg(k, q, ActionSpace::Discrete(n));
    MeanMatrix means(k, n);
    for (double& m : means.flat()) m = next();

    OracleCheckInstance inst;
    inst.num_resources = k;
    inst.num_levels = n;
    inst.budget = q;
    inst.exact_value = solve_exact_dp(means, cfg).value;
    inst.greedy_value = solve_greedy(means, cfg).value;
    double best = -std::numeric_limits<double>::infinity();
    for_each_feasible_allocation(cfg, [&](const Allocation& alloc) {
      best = std::max(best, allocation_value(alloc, means));
    });
    inst.enumerated_value = best;
    if (inst.exact_value != inst.enumerated_value) report.exact_pass = false;
    if (inst.exact_value > 0.0) {
      worst_ratio = std::min(worst_ratio, inst.greedy_value / inst.exact_value);
    }
    report.instances.push_back(inst);
  }
  report.greedy_alpha = worst_ratio;
  return report;
}

std::string OracleCheckReport::summary() const {
  std::size_t matches = 0;
  for (const auto& inst : instances) matches += inst.exact_value == inst.enumerated_value;
  return std::string("exact: ") + (exact_pass ? "PASS" : "FAIL") + " (" +
         std::to_string(matches) + "/" + std::to_string(instances.size()) +
         " instances match enumeration), greedy empirical alpha = " +
         format_double(greedy_alpha);
}

ExperimentResult execute_experiment(const ExperimentConfig& config, int jobs) {
  validate_config(config);
  ExperimentResult result;
  result.config = config;
  result.hash = config_hash(config);
  switch (config.mode) {
    case Mode::kDra:
      execute_dra(config, jobs, result);
      break;
    case Mode::kCra:
      execute_cra(config, jobs, result);
      break;
    case Mode::kOracleCheck:
      result.oracle_check = run_oracle_check(config.oracle_check_instances, config.seed);
      break;
    case Mode::kBounds:
      execute_bounds(config, result);
      break;
  }
  return result;
}

// -- Output --------------------------------------------------------------------

namespace {

std::string hex64(std::uint64_t value) {
  char buffer[17];
  std::snprintf(buffer, sizeof(buffer), "%016llx", static_cast<unsigned long long>(value));
  return buffer;
}

void write_metadata(CsvWriter& out, const ExperimentResult& result) {
  const auto& cfg = result.config;
  out.comment("mode", mode_name(cfg.mode));
  out.comment("config_hash", hex64(result.hash));
  out.comment("seed", std::to_string(cfg.seed));
  if (cfg.mode == Mode::kOracleCheck) return;
  out.comment("K", std::to_string(cfg.num_resources));
  out.comment("Q", format_double(cfg.budget));
  out.comment("reward_family", family_name(cfg.reward.family));
  out.comment("oracle", cfg.oracle.kind == OracleKind::kExactDp ? "exact_dp" : "greedy");
  out.comment("alpha", format_double(cfg.oracle.alpha));
  out.comment("beta", format_double(cfg.oracle.beta));
  out.comment("replications", std::to_string(cfg.replications));
  if (result.opt) out.comment("opt", format_double(*result.opt));
  if (result.delta_min) out.comment("delta_min", format_double(*result.delta_min));
  if (result.delta_max) out.comment("delta_max", format_double(*result.delta_max));
  if (result.lipschitz) out.comment("L", format_double(*result.lipschitz));
  if (cfg.mode == Mode::kCra) out.comment("B", format_double(cfg.smoothness));
  if (result.opt_reference_lo) {
    out.comment("opt_reference_lo", format_double(*result.opt_reference_lo));
    out.comment("opt_reference_hi", format_double(*result.opt_reference_hi));
    out.comment("reference_refinement", std::to_string(cfg.reference_refinement));
  }
  for (const auto& row : result.rows) {
    if (!row.epsilon) continue;
    const std::string tag = "T" + std::to_string(row.horizon) + ".";
    out.comment(tag + "epsilon_star", format_double(*row.epsilon_star));
    out.comment(tag + "epsilon", format_double(*row.epsilon));
    out.comment(tag + "N", std::to_string(row.num_levels));
    out.comment(tag + "capped", row.capped ? "true" : "false");
  }
}

}  // namespace

std::vector<std::filesystem::path> emit_csv(const ExperimentResult& result,
                                            const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create output directory " + dir.string());
  std::vector<std::filesystem::path> written;
  const auto& cfg = result.config;

  if (result.oracle_check) {
    const auto path = dir / "oracle_check.csv";
    CsvWriter out(path);
    write_metadata(out, result);
    out.comment("summary", result.oracle_check->summary());
    out.row({"instance", "K", "N", "Q", "exact_value", "enumerated_value", "exact_match",
             "greedy_value", "greedy_ratio"});
    int i = 0;
    for (const auto& inst : result.oracle_check->instances) {
      const bool match = inst.exact_value == inst.enumerated_value;
      out.row({std::to_string(i++), std::to_string(inst.num_resources),
               std::to_string(inst.num_levels), format_double(inst.budget),
               format_double(inst.exact_value), format_double(inst.enumerated_value),
               match ? "true" : "false", format_double(inst.greedy_value),
               inst.exact_value > 0.0 ? format_double(inst.greedy_value / inst.exact_value)
                                      : std::string()});
    }
    out.close();
    written.push_back(path);
    return written;
  }

  if (cfg.mode == Mode::kBounds) {
    auto path = dir / "bounds.csv";
    CsvWriter out(path);
    write_metadata(out, result);
    out.row({"horizon", "delta_min", "delta_max", "theorem1_dep_bound",
             "theorem1_indep_bound"});
    for (const auto& row : result.bounds) {
      out.row({std::to_string(row.horizon), format_optional(result.delta_min),
               format_optional(result.delta_max), format_optional(row.dependent),
               format_double(row.independent)});
    }
    out.close();
    written.push_back(path);

    path = dir / "gaps.csv";
    CsvWriter gaps(path);
    write_metadata(gaps, result);
    gaps.row({"resource", "level", "delta_min", "delta_max"});
    for (const auto& g : result.gap_arms) {
      gaps.row({std::to_string(g.resource), std::to_string(g.level),
                format_double(g.delta_min), format_double(g.delta_max)});
    }
    gaps.close();
    written.push_back(path);
    return written;
  }

  {
    const auto path = dir / "aggregate.csv";
    CsvWriter out(path);
    write_metadata(out, result);
    out.row({"horizon", "mean_regret", "std_regret", "theorem1_dep_bound",
             "theorem1_indep_bound", "theorem2_normalized", "epsilon", "N",
             "lemma1_violations"});
    for (const auto& row : result.rows) {
      out.row({std::to_string(row.horizon), format_double(row.mean_regret),
               format_double(row.std_regret), format_optional(row.theorem1_dep_bound),
               format_optional(row.theorem1_indep_bound),
               format_optional(row.theorem2_normalized), format_optional(row.epsilon),
               std::to_string(row.num_levels), format_double(row.lemma1_violations)});
    }
    out.close();
    written.push_back(path);
  }

  if (cfg.mode == Mode::kCra) {
    const auto path = dir / "decomposition.csv";
    CsvWriter out(path);
    write_metadata(out, result);
    out.row({"horizon", "mean_regret", "mean_learning_term", "discretization_term",
             "opt_grid"});
    for (const auto& row : result.rows) {
      out.row({std::to_string(row.horizon), format_double(row.mean_regret),
               format_optional(row.mean_learning_term),
               format_optional(row.discretization_term), format_optional(row.opt_grid)});
    }
    out.close();
    written.push_back(path);
  }

  for (const auto& curve : result.curves) {
    const auto path = dir / ("curve_T" + std::to_string(curve.horizon) + ".csv");
    CsvWriter out(path);
    write_metadata(out, result);
    out.comment("horizon", std::to_string(curve.horizon));
    out.row({"round", "mean_cum_regret", "std_cum_regret"});
    for (const auto& p : curve.points) {
      out.row({std::to_string(p.round), format_double(p.mean), format_double(p.std)});
    }
    out.close();
    written.push_back(path);
  }

  for (const auto& rep : result.traces) {
    const auto path = dir / ("trace_T" + std::to_string(rep.horizon) + "_rep" +
                             std::to_string(rep.replication) + ".csv");
    CsvWriter out(path);
    write_metadata(out, result);
    out.comment("horizon", std::to_string(rep.horizon));
    out.comment("replication", std::to_string(rep.replication));
    out.comment("replication_seed", std::to_string(rep.seed));
    const int k = rep.trace.num_resources();
    std::vector<std::string> header{"round"};
    for (int i = 1; i <= k; ++i) header.push_back("level_" + std::to_string(i));
    for (int i = 1; i <= k; ++i) header.push_back("reward_" + std::to_string(i));
    header.push_back("expected_reward");
    header.push_back("cumulative_expected_reward");
    out.row(header);
    std::vector<std::string> fields;
    for (std::int64_t t = 1; t <= rep.trace.length(); ++t) {
      fields.assign(1, std::to_string(t));
      for (int level : rep.trace.levels(t)) fields.push_back(std::to_string(level));
      for (double reward : rep.trace.rewards(t)) fields.push_back(format_double(reward));
      fields.push_back(format_double(rep.trace.expected_reward(t)));
      fields.push_back(format_double(rep.trace.cumulative_expected_reward(t)));
      out.row(fields);
    }
    out.close();
    written.push_back(path);
  }
  return written;
}

std::vector<std::filesystem::path> run_experiment(const ExperimentConfig& config,
                                                  int jobs) {
  const ExperimentResult result = execute_experiment(config, jobs);
  return emit_csv(result, config.output_dir);
}

}  // namespace resalloc
