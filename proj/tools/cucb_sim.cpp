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

#include <cstdint>
#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "resalloc/errors.hpp"
#include "resalloc/experiment.hpp"

namespace {

constexpr int kExitConfig = 1;
constexpr int kExitRuntime = 2;

int finish(const resalloc::ExperimentResult& result) {
  for (const auto& w : result.warnings) std::cerr << "warning: " << w << "\n";
  const auto files = resalloc::emit_csv(result, result.config.output_dir);
  if (result.oracle_check) std::cout << result.oracle_check->summary() << "\n";
  for (const auto& f : files) std::cout << "wrote " << f.string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simulate combinatorial UCB resource allocation."};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::string> out_dir;
  std::optional<std::uint64_t> seed;
  int jobs = 1;

  auto* run = app.add_subcommand("run", "Run the experiment described by a config file");
  run->add_option("--config", config_path, "JSON config file")->required();
  run->add_option("--out", out_dir, "Output directory (overrides output.dir)");
  run->add_option("--seed", seed, "Base seed (overrides seed)");
  run->add_option("--jobs", jobs, "Worker threads for replications")
      ->check(CLI::PositiveNumber);

  int instances = 200;
  std::uint64_t check_seed = 0;
  std::string check_out = "results";
  auto* check = app.add_subcommand("oracle-check",
                                   "Compare the exact and greedy oracles with enumeration");
  check->add_option("--instances", instances, "Random instances")->check(CLI::PositiveNumber);
  check->add_option("--seed", check_seed, "Instance seed");
  check->add_option("--out", check_out, "Output directory");

  std::string bounds_config;
  std::optional<std::string> bounds_out;
  auto* bounds = app.add_subcommand("bounds", "Compute gaps and regret bounds for a config");
  bounds->add_option("--config", bounds_config, "JSON config file")->required();
  bounds->add_option("--out", bounds_out, "Output directory (overrides output.dir)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  resalloc::ExperimentConfig cfg;
  try {
    if (*run) {
      cfg = resalloc::load_config(config_path);
      if (out_dir) cfg.output_dir = *out_dir;
      if (seed) cfg.seed = *seed;
    } else if (*check) {
      cfg.mode = resalloc::Mode::kOracleCheck;
      cfg.oracle_check_instances = instances;
      cfg.seed = check_seed;
      cfg.output_dir = check_out;
    } else {
      cfg = resalloc::load_config(bounds_config);
      cfg.mode = resalloc::Mode::kBounds;
      if (bounds_out) cfg.output_dir = *bounds_out;
    }
    resalloc::validate_config(cfg);
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  }

  try {
    return finish(resalloc::execute_experiment(cfg, jobs));
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
}
