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

// Runs one configured experiment and writes its artifacts into cfg.out:
//
//   <kind>.jsonl        meta record, then one record per realisation
//   <kind>.summary.csv  Monte Carlo summary rows (estimator kinds)
//   <kind>.resolved.cfg fully resolved configuration
//   assemble.mtx, decay.csv  for those kinds
//
// Every file carries the tool version and the configuration hash. Output is
// written with LF line endings and does not depend on the thread count.

#include <iosfwd>
#include <string>
#include <vector>

#include "mpal/config.hpp"
#include "mpal/stats.hpp"

namespace mpal {

struct SummaryRow {
  MCEstimate estimate;
  int side = 0;
  std::string mass;  // empty when the event has no mass parameter
};

inline constexpr const char* kSummaryColumns = "event,L,N,d,g,m,trials,hits,p_hat,ci_lo,ci_hi,grid_meta,seed";

void write_summary_csv(std::ostream& os, const ExperimentConfig& cfg, const std::vector<SummaryRow>& rows);

struct RunResult {
  std::vector<std::string> files;
  std::vector<SummaryRow> summary;
  std::vector<std::string> warnings;
};

/// Throws ConfigError for bad input and SolverError (RealizationError inside
/// sweeps) for numerical failures.
RunResult run_experiment(const ExperimentConfig& cfg);

}  // namespace mpal
