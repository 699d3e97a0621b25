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

#include <cmath>
#include <random>

#include "doctest.h"
#include "mpal/errors.hpp"
#include "mpal/stats.hpp"

using namespace mpal;

namespace {

// P(Bin(n, p) <= k) by direct summation in log space.
double binom_cdf(int k, int n, double p) {
  if (k < 0) return 0.0;
  double s = 0.0;
  for (int i = 0; i <= std::min(k, n); ++i) {
    const double lc = std::lgamma(n + 1.0) - std::lgamma(i + 1.0) - std::lgamma(n - i + 1.0);
    s += std::exp(lc + i * std::log(p) + (n - i) * std::log1p(-p));
  }
  return s;
}

// Bisection for the p where f(p) crosses the target, f monotone decreasing.
template <class F>
double solve_decreasing(F f, double target) {
  double lo = 0.0, hi = 1.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) > target ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("Clopper-Pearson closed forms") {
  for (int n : {1, 7, 100, 2000}) {
    const auto zero = clopper_pearson(0, n);
    CHECK(zero.lo == 0.0);
    CHECK(zero.hi == doctest::Approx(1.0 - std::pow(0.025, 1.0 / n)).epsilon(1e-10));
    const auto all = clopper_pearson(n, n);
    CHECK(all.hi == 1.0);
    CHECK(all.lo == doctest::Approx(std::pow(0.025, 1.0 / n)).epsilon(1e-10));
  }
  const auto half = clopper_pearson(5, 10);
  CHECK(half.lo == doctest::Approx(0.187086).epsilon(1e-5));
  CHECK(half.hi == doctest::Approx(0.812914).epsilon(1e-5));
}

TEST_CASE("Clopper-Pearson against inverted binomial tails") {
  std::mt19937 rng(3);
  for (int t = 0; t < 40; ++t) {
    const int n = 1 + static_cast<int>(rng() % 300);
    const int k = static_cast<int>(rng() % (n + 1));
    const auto ci = clopper_pearson(k, n);
    if (k > 0) {
      // lo solves P(Bin(n, p) >= k) = 0.025.
      const double lo = solve_decreasing([&](double p) { return binom_cdf(k - 1, n, p); }, 0.975);
      CHECK(ci.lo == doctest::Approx(lo).epsilon(1e-7));
    }
    if (k < n) {
      const double hi = solve_decreasing([&](double p) { return binom_cdf(k, n, p); }, 0.025);
      CHECK(ci.hi == doctest::Approx(hi).epsilon(1e-7));
    }
    const double p = static_cast<double>(k) / n;
    CHECK(ci.lo <= p);
    CHECK(p <= ci.hi);
  }
  CHECK_THROWS_AS(clopper_pearson(0, 0), Error);
  CHECK_THROWS_AS(clopper_pearson(4, 3), Error);
}

TEST_CASE("estimates") {
  const auto e = make_estimate("ev", 3, 12);
  CHECK(e.p_hat == 0.25);
  CHECK(e.grid_meta == "exact");
  CHECK(separated({0.0, 0.1}, {0.2, 0.3}));
  CHECK_FALSE(separated({0.0, 0.2}, {0.2, 0.3}));
  CHECK_FALSE(fitted_exponent(0.0, 8, 2.0));
  CHECK(*fitted_exponent(1.0, 8, 2.0) == 0.0);
  CHECK_FALSE(std::signbit(*fitted_exponent(1.0, 8, 2.0)));
  CHECK(*fitted_exponent(1.0 / 64.0, 8, 2.0) == doctest::Approx(1.0));
}

TEST_CASE("median and quantiles") {
  const auto odd = median_with_ci({5, 1, 3});
  CHECK(odd.median == 3);
  CHECK(odd.lo == 1);
  CHECK(odd.hi == 5);
  CHECK(median_with_ci({4, 1, 3, 2}).median == 2.5);

  // For n = 20 the order-statistic interval is [x_(6), x_(15)].
  std::vector<double> v;
  for (int i = 1; i <= 20; ++i) v.push_back(i);
  const auto m = median_with_ci(v);
  CHECK(m.lo == 6);
  CHECK(m.hi == 15);
  const int j = 6;
  CHECK(binom_cdf(j - 1, 20, 0.5) <= 0.025);
  CHECK(binom_cdf(j, 20, 0.5) > 0.025);

  CHECK(quantile({3, 1, 2}, 0.5) == 2);
  CHECK(quantile({1, 2, 3, 4}, 0.25) == doctest::Approx(1.75));
  CHECK(quantile({1, 2}, 1.0) == 2);
  CHECK_THROWS(median_with_ci({}));
}
