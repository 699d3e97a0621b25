// Copyright 2026 The mpal Authors
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

// mpal: command-line front end. One subcommand per experiment kind; the
// configuration file supplies everything else.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "mpal/config.hpp"
#include "mpal/errors.hpp"
#include "mpal/experiment.hpp"
#include "mpal/format.hpp"
#include "mpal/kernels.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitSolver = 3;

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"mpal: multi-particle localisation numerics"};
  app.set_version_flag("--version", mpal::kVersion);
  app.require_subcommand(1);
  app.fallthrough();  // global options may follow the subcommand

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  std::optional<std::string> out;
  bool print_config = false;
  app.add_option("--config", config_path, "Experiment configuration file")->check(CLI::ExistingFile);
  app.add_option("--seed", seed, "Master seed (overrides the configuration)");
  app.add_option("--threads", threads, "Worker threads (falls back to $THREADS)")->check(CLI::PositiveNumber);
  app.add_option("--out", out, "Output directory");
  app.add_flag("--print-config", print_config, "Print the resolved configuration and exit");

  for (const auto& kind : mpal::experiment_kinds()) app.add_subcommand(kind, "Run the " + kind + " experiment");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  mpal::ExperimentConfig cfg;
  try {
    if (!config_path.empty()) cfg = mpal::parse_config_file(config_path);
    cfg.kind = app.get_subcommands().front()->get_name();
    if (seed) {
      cfg.seed = *seed;
      cfg.model.disorder.master_seed = *seed;
    }
    if (threads) {
      cfg.threads = *threads;
    } else if (const char* env = std::getenv("THREADS"); env && *env) {
      try {
        cfg.threads = std::stoi(env);
      } catch (const std::exception&) {
        throw mpal::ConfigError(std::string("THREADS is not an integer: '") + env + "'", 0);
      }
    }
    if (out) cfg.out = *out;
    cfg.validate();
    if (print_config) {
      std::cout << mpal::serialize(cfg);
      return 0;
    }

    const auto result = mpal::run_experiment(cfg);
    std::cerr << "mpal " << mpal::kVersion << " kind=" << cfg.kind << " config=" << mpal::config_hash_hex(cfg)
              << " isa=" << mpal::kernels::to_string(mpal::kernels::active_isa()) << " threads=" << cfg.threads << '\n';
    for (const auto& w : result.warnings) std::cerr << "warning: " << w << '\n';
    for (const auto& row : result.summary) {
      const auto& e = row.estimate;
      std::cout << e.event << ": " << e.hits << "/" << e.trials << " p_hat=" << mpal::fmt17(e.p_hat) << " ci95=["
                << mpal::fmt17(e.ci95.lo) << ", " << mpal::fmt17(e.ci95.hi) << "]";
      if (e.fitted_exponent) std::cout << " fitted_exponent=" << mpal::fmt17(*e.fitted_exponent);
      std::cout << '\n';
    }
    for (const auto& f : result.files) std::cout << "wrote " << f << '\n';
    return 0;
  } catch (const mpal::ConfigError& e) {
    std::cerr << "config error";
    if (e.line() > 0) std::cerr << " (line " << e.line() << ")";
    std::cerr << ": " << e.what() << '\n';
    return kExitConfig;
  } catch (const mpal::RealizationError& e) {
    const auto index = cfg.realization + e.index();
    std::cerr << "solver failure in realization " << index << ": " << e.what()
              << "\nrerun it alone with realization = " << index << " and trials = 1\n";
    return kExitSolver;
  } catch (const mpal::SolverError& e) {
    std::cerr << "solver failure: " << e.what() << '\n';
    return kExitSolver;
  } catch (const mpal::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
