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

// Eigenfunction localisation diagnostics. Decay is measured in sup-norm
// shells around the localisation centre (the site of largest amplitude), not
// around the box centre.

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "mpal/geometry.hpp"
#include "mpal/spectral.hpp"

namespace mpal {

enum class ShellStatistic { max, mean };

inline constexpr double kShellFloor = 1e-14;

struct DecayFit {
  Config center;
  double mass_hat = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  int shells_used = 0;
  std::string reference = "localization-center";
};

/// Site of largest |psi|; the lexicographically smallest one on ties.
Config localization_center(std::span<const double> psi, const SiteIndex& index);

/// Least-squares fit of log(shell statistic) against shell radius.
/// Throws InsufficientShellsError with fewer than three shells above kShellFloor.
DecayFit fit_decay_mass(std::span<const double> psi, const SiteIndex& index,
                        ShellStatistic statistic = ShellStatistic::max);

struct MassProfile {
  std::vector<std::size_t> eigenindices;
  std::vector<double> eigenvalues;
  std::vector<DecayFit> fits;
  std::size_t skipped = 0;  // states without enough shells
  double median = 0.0;
  double q1 = 0.0;
  double q3 = 0.0;
  double fraction_positive = 0.0;

  bool empty() const noexcept { return fits.empty(); }
};

/// Fits every eigenstate with eigenvalue in [lo, hi].
MassProfile mass_profile(const SpectralData& spec, double lo, double hi,
                         ShellStatistic statistic = ShellStatistic::max);

/// Energy window spanning the middle half of the eigenvalues by index.
std::pair<double, double> central_half_window(std::span<const double> eigenvalues);

/// CSV: eigenindex,eigenvalue,center,mass_hat,r2,shells_used
void write_decay_csv(std::ostream& os, const MassProfile& profile);

}  // namespace mpal
