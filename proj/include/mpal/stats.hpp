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

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace mpal {

struct Interval {
  double lo = 0.0;
  double hi = 1.0;
};

/// Exact (Clopper-Pearson) two-sided interval for a binomial proportion.
Interval clopper_pearson(std::uint64_t hits, std::uint64_t trials, double confidence = 0.95);

/// Disjoint intervals (a strictly below b or b strictly below a).
bool separated(const Interval& a, const Interval& b);

/// Empirical probability of an event over independent disorder realisations.
struct MCEstimate {
  std::string event;
  std::uint64_t trials = 0;
  std::uint64_t hits = 0;
  double p_hat = 0.0;
  Interval ci95;
  std::string grid_meta = "exact";
  /// -log(p_hat) / (exponent_scale * log L) when p_hat > 0, e.g. the fitted p
  /// of an L^{-2p} bound.
  std::optional<double> fitted_exponent;
  std::string pair_kind;  // FI/FI, PI/PI, FI/PI for pair events
  std::vector<std::string> warnings;
};

MCEstimate make_estimate(std::string event, std::uint64_t hits, std::uint64_t trials, std::string grid_meta = "exact");

/// Fitted exponent of the bound p <= L^{-scale * q}; empty when p_hat == 0.
std::optional<double> fitted_exponent(double p_hat, int side, double scale);

struct MedianCI {
  double median = 0.0;
  double lo = 0.0;
  double hi = 0.0;
};

/// Sample median with the distribution-free order-statistic interval.
MedianCI median_with_ci(std::vector<double> values, double confidence = 0.95);

/// Linear-interpolated quantile of an unsorted sample, q in [0, 1].
double quantile(std::vector<double> values, double q);

}  // namespace mpal
