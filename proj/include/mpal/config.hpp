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

#pragma once

// Experiment configuration: a sectioned key = value text format.
//
//   [model]       lattice, particles, disorder, interaction
//   [box]         center (flattened coordinates), side
//   [box2]        second box for pair experiments
//   [msa]         scale schedule parameters
//   [experiment]  kind, trials, seed, energy grid and kind-specific knobs
//
// '#' starts a comment. Unknown sections and keys are rejected with the line
// number. serialize() writes every field, defaults included, and parses back
// to the same configuration.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "mpal/decay.hpp"
#include "mpal/geometry.hpp"
#include "mpal/hamiltonian.hpp"
#include "mpal/msa.hpp"
#include "mpal/spectral.hpp"

namespace mpal {

inline constexpr const char* kVersion = "0.1.0";

const std::vector<std::string>& experiment_kinds();

struct ExperimentConfig {
  ExperimentConfig();

  ModelParams model;  // model.disorder.master_seed mirrors `seed`
  MSAParams msa;
  std::optional<BoxSpec> box;
  std::optional<BoxSpec> box2;

  std::string kind = "classify";
  std::uint64_t seed = 0;
  std::uint64_t trials = 1;
  std::uint64_t realization = 0;  // first realisation index
  double energy = 0.0;
  double mass = 1.0;
  std::optional<double> grid_lo;  // default: msa interval
  std::optional<double> grid_hi;
  int grid_points = 64;
  int sub_side = 0;  // 0: derived from the box side and alpha
  int stride = 0;    // 0: ceil(sub_side / 2)
  int cnr_stride = 1;
  BoxKind box_kind = BoxKind::any;
  std::uint64_t threshold = 1;
  std::uint64_t candidate_cap = 64;
  int scales = 3;
  std::vector<int> source;  // green: site x (flattened), default box centre
  std::vector<int> target;  // green: site y, default first boundary site
  std::optional<double> window_lo;  // decay: default central half of the spectrum
  std::optional<double> window_hi;
  ShellStatistic shell_statistic = ShellStatistic::max;
  int covering_range = 40;           // geometry-check: coordinate range for the covering suite
  std::uint64_t samples = 10000;     // geometry-check: sampled FI pairs

  // Runtime only; excluded from the hash.
  int threads = 1;
  std::string out = ".";

  EnergyGrid grid() const;
  /// Checks cross-field consistency; throws ConfigError.
  void validate() const;
};

ExperimentConfig parse_config(std::istream& in);
ExperimentConfig parse_config_file(const std::string& path);

/// Resolved configuration text; `runtime` adds threads and out.
std::string serialize(const ExperimentConfig& cfg, bool runtime = true);

/// FNV-1a 64 of the serialized configuration without runtime fields.
std::uint64_t config_hash(const ExperimentConfig& cfg);
std::string config_hash_hex(const ExperimentConfig& cfg);

}  // namespace mpal
