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

#include "mpal/stats.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/distributions/beta.hpp>
#include <boost/math/distributions/binomial.hpp>

#include "mpal/errors.hpp"

namespace mpal {

Interval clopper_pearson(std::uint64_t hits, std::uint64_t trials, double confidence) {
  if (trials == 0) throw Error("clopper_pearson: no trials");
  if (hits > trials) throw Error("clopper_pearson: more hits than trials");
  const double alpha = 1.0 - confidence;
  const auto k = static_cast<double>(hits);
  const auto n = static_cast<double>(trials);
  Interval ci{0.0, 1.0};
  if (hits > 0) ci.lo = boost::math::quantile(boost::math::beta_distribution<double>(k, n - k + 1.0), alpha / 2.0);
  if (hits < trials) {
    ci.hi = boost::math::quantile(boost::math::beta_distribution<double>(k + 1.0, n - k), 1.0 - alpha / 2.0);
  }
  // Guard the ordering lo <= p_hat <= hi against last-ulp rounding.
  const double p = k / n;
  ci.lo = std::min(ci.lo, p);
  ci.hi = std::max(ci.hi, p);
  return ci;
}

bool separated(const Interval& a, const Interval& b) { return a.hi < b.lo || b.hi < a.lo; }

MCEstimate make_estimate(std::string event, std::uint64_t hits, std::uint64_t trials, std::string grid_meta) {
  MCEstimate e;
  e.event = std::move(event);
  e.hits = hits;
  e.trials = trials;
  e.p_hat = static_cast<double>(hits) / static_cast<double>(trials);
  e.ci95 = clopper_pearson(hits, trials);
  e.grid_meta = std::move(grid_meta);
  return e;
}

std::optional<double> fitted_exponent(double p_hat, int side, double scale) {
  if (!(p_hat > 0.0) || side < 2) return std::nullopt;
  return 0.0 - std::log(p_hat) / (scale * std::log(static_cast<double>(side)));  // +0 when p_hat = 1
}

MedianCI median_with_ci(std::vector<double> values, double confidence) {
  if (values.empty()) throw Error("median of an empty sample");
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  MedianCI out;
  out.median = n % 2 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
  // Largest j with P(B <= j - 1) <= alpha/2, B ~ Bin(n, 1/2); the interval
  // [x_(j), x_(n+1-j)] (1-based) then covers the median with the requested
  // confidence.
  const double half_alpha = (1.0 - confidence) / 2.0;
  const boost::math::binomial_distribution<double> bin(static_cast<double>(n), 0.5);
  std::size_t j = 0;
  while (j + 1 <= n / 2 && boost::math::cdf(bin, static_cast<double>(j)) <= half_alpha) ++j;
  if (j == 0) {
    out.lo = values.front();
    out.hi = values.back();
  } else {
    out.lo = values[j - 1];
    out.hi = values[n - j];
  }
  return out;
}

double quantile(std::vector<double> values, double q) {
  if (values.empty()) throw Error("quantile of an empty sample");
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const auto i = static_cast<std::size_t>(std::floor(pos));
  if (i + 1 >= values.size()) return values.back();
  const double f = pos - static_cast<double>(i);
  return values[i] * (1.0 - f) + values[i + 1] * f;
}

}  // namespace mpal
