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

#include "mpal/decay.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "mpal/errors.hpp"
#include "mpal/format.hpp"
#include "mpal/kernels.hpp"
#include "mpal/stats.hpp"

namespace mpal {

namespace {

void require_normalised(std::span<const double> psi, const SiteIndex& index) {
  if (psi.size() != index.size()) throw DimensionError("eigenvector length does not match the box");
  double n2 = 0.0;
  for (double v : psi) n2 += v * v;
  if (std::fabs(n2 - 1.0) > 1e-8) throw Error("eigenvector is not normalised");
}

}  // namespace

Config localization_center(std::span<const double> psi, const SiteIndex& index) {
  require_normalised(psi, index);
  return index.config_at(kernels::argmax_abs(psi));
}

DecayFit fit_decay_mass(std::span<const double> psi, const SiteIndex& index, ShellStatistic statistic) {
  DecayFit fit;
  fit.center = localization_center(psi, index);
  const auto& c = fit.center.coords();
  const int max_r = 2 * index.box().half();
  std::vector<double> stat(static_cast<std::size_t>(max_r) + 1, 0.0);
  std::vector<std::size_t> count(stat.size(), 0);
  std::vector<int> flat(c.size());
  for (std::size_t i = 0; i < index.size(); ++i) {
    index.coords_at(i, flat);
    const auto r = static_cast<std::size_t>(sup_norm(flat, c));
    const double a = std::fabs(psi[i]);
    if (statistic == ShellStatistic::max) {
      stat[r] = std::max(stat[r], a);
    } else {
      stat[r] += a;
    }
    ++count[r];
  }
  std::vector<double> xs, ys;
  for (std::size_t r = 0; r < stat.size(); ++r) {
    if (count[r] == 0) continue;
    const double s = statistic == ShellStatistic::max ? stat[r] : stat[r] / static_cast<double>(count[r]);
    if (s <= kShellFloor) continue;
    xs.push_back(static_cast<double>(r));
    ys.push_back(std::log(s));
  }
  fit.shells_used = static_cast<int>(xs.size());
  if (xs.size() < 3) {
    throw InsufficientShellsError("only " + std::to_string(xs.size()) + " usable shells (need 3)");
  }
  const double n = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  const double slope = sxy / sxx;
  fit.mass_hat = -slope;
  fit.intercept = my - slope * mx;
  fit.r2 = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  return fit;
}

MassProfile mass_profile(const SpectralData& spec, double lo, double hi, ShellStatistic statistic) {
  MassProfile p;
  const SiteIndex index(spec.box);
  std::vector<double> masses;
  for (Eigen::Index i = 0; i < spec.eigenvalues.size(); ++i) {
    const double l = spec.eigenvalues[i];
    if (l < lo || l > hi) continue;
    const auto col = spec.eigenvectors.col(i);
    try {
      p.fits.push_back(fit_decay_mass({col.data(), static_cast<std::size_t>(col.size())}, index, statistic));
    } catch (const InsufficientShellsError&) {
      ++p.skipped;
      continue;
    }
    p.eigenindices.push_back(static_cast<std::size_t>(i));
    p.eigenvalues.push_back(l);
    masses.push_back(p.fits.back().mass_hat);
  }
  if (masses.empty()) return p;
  p.median = quantile(masses, 0.5);
  p.q1 = quantile(masses, 0.25);
  p.q3 = quantile(masses, 0.75);
  const auto pos = std::count_if(masses.begin(), masses.end(), [](double m) { return m > 0.0; });
  p.fraction_positive = static_cast<double>(pos) / static_cast<double>(masses.size());
  return p;
}

std::pair<double, double> central_half_window(std::span<const double> eigenvalues) {
  if (eigenvalues.empty()) return {1.0, 0.0};
  std::vector<double> s(eigenvalues.begin(), eigenvalues.end());
  std::sort(s.begin(), s.end());
  const std::size_t m = s.size();
  const std::size_t first = m / 4;
  const std::size_t last = std::max(first, (3 * m) / 4 - (m >= 4 ? 1 : 0));
  return {s[first], s[std::min(last, m - 1)]};
}

void write_decay_csv(std::ostream& os, const MassProfile& profile) {
  os << "eigenindex,eigenvalue,center,mass_hat,r2,shells_used\n";
  for (std::size_t i = 0; i < profile.fits.size(); ++i) {
    const auto& f = profile.fits[i];
    os << profile.eigenindices[i] << ',' << fmt17(profile.eigenvalues[i]) << ",\"" << to_string(f.center) << "\","
       << fmt17(f.mass_hat) << ',' << fmt17(f.r2) << ',' << f.shells_used << '\n';
  }
}

}  // namespace mpal
