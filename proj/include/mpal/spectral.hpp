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

// Diagonalisation, Green's functions and the spectral predicates on boxes:
// (E,m)-NS/S, E-R/NR, E-CNR, m-tunnelling, the tensor-sum spectrum of
// partially interactive boxes and the eigen-expansion of their Green's
// functions.

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "mpal/geometry.hpp"
#include "mpal/hamiltonian.hpp"

namespace mpal {

struct SpectralData {
  BoxSpec box;
  Eigen::VectorXd eigenvalues;   // ascending
  Eigen::MatrixXd eigenvectors;  // column i belongs to eigenvalues[i]

  std::span<const double> values() const { return {eigenvalues.data(), static_cast<std::size_t>(eigenvalues.size())}; }
};

/// Full dense symmetric diagonalisation. With `verify`, residual,
/// normalisation and orthogonality are checked and SolverError is thrown
/// on violation.
SpectralData diagonalize(const AssembledOperator& op, bool verify = true);
/// Ascending eigenvalues only.
Eigen::VectorXd eigenvalues_only(const AssembledOperator& op);

/// Relative resolvent floor: E counts as numerically resonant when
/// min |E - lambda| < floor * (1 + max |lambda|).
inline constexpr double kResolventFloor = 1e-12;

double resolvent_floor(std::span<const double> eigenvalues);
bool numerically_resonant(std::span<const double> eigenvalues, double e);

struct ResonanceParams {
  double beta = 0.5;
  void validate() const;
};

/// Uniform energy grid over [lo, hi]. Empty when lo > hi.
struct EnergyGrid {
  double lo = 0.0;
  double hi = 0.0;
  int points = 64;

  bool empty() const noexcept { return lo > hi || points < 1; }
  std::vector<double> energies() const;
  std::string describe() const;  // e.g. "uniform:64:[-1,1]"
};

/// Row G(E; x, .) of the resolvent by one direct linear solve.
/// Throws ResonantEnergyError when E is within the floor of the spectrum.
Eigen::VectorXd green_row(const AssembledOperator& op, double e, const Config& x,
                          std::span<const double> eigenvalues = {});
double green(const AssembledOperator& op, double e, const Config& x, const Config& y,
             std::span<const double> eigenvalues = {});

/// Eigen-expansion sum_i v_i(x) v_i(y) / (lambda_i - E).
double green_from_spectrum(const SpectralData& spec, double e, const Config& x, const Config& y);

struct NSResult {
  bool non_singular = false;
  bool resonant = false;  // E inside the resolvent floor; classified singular
  double gf_max = 0.0;    // max over boundary y of |G(E; u, y)|
  double threshold = 0.0; // exp(-m L)
  std::optional<Config> witness;
};

/// (E,m)-NS test against the threshold exp(-m * side) using a direct solve.
NSResult is_ENS(const AssembledOperator& op, const SpectralData& spec, double e, double m);

double resonance_radius(int side, double beta);  // exp(-side^beta)
bool is_ER(std::span<const double> eigenvalues, double e, int side, double beta);

/// Side of the sub-boxes scanned by the CNR test: round(L^{1/alpha}).
int cnr_sub_side(int side, double alpha);

/// Centres of all boxes of side `sub_side` contained in `box`, on a grid of
/// the given stride anchored at the low corner.
std::vector<Config> sub_box_centres(const BoxSpec& box, int sub_side, int stride = 1);

struct CNRResult {
  bool cnr = false;
  bool box_resonant = false;
  int sub_side = 0;
  int stride = 1;
  bool degenerate = false;  // sub_side >= side: only the box itself was tested
  std::size_t sub_boxes_checked = 0;
  std::optional<BoxSpec> offending;
};

CNRResult is_ECNR(const BoxSpec& box, const ModelParams& params, const Potential& potential, double e,
                  double beta, double alpha, int stride = 1);

/// Precomputed eigen-data of one box for fast repeated (E,m)-S tests: the
/// boundary Green's function maximum is evaluated by the eigen-expansion.
class SingularityScanner {
 public:
  SingularityScanner(const AssembledOperator& op, const SpectralData& spec);
  SingularityScanner(const BoxSpec& box, const ModelParams& params, const Potential& potential);

  const BoxSpec& box() const noexcept { return box_; }
  std::span<const double> eigenvalues() const { return {lambda_.data(), lambda_.size()}; }
  /// max over boundary y of |G(E; u, y)|; +inf when E is numerically resonant.
  double boundary_max(double e) const;
  bool singular(double e, double m) const;

 private:
  void init(const SpectralData& spec);

  BoxSpec box_;
  std::vector<double> lambda_;
  std::vector<double> centre_row_;     // v_i(u)
  std::vector<double> boundary_rows_;  // row-major (#boundary x M): v_i(y)
  std::size_t n_boundary_ = 0;
  double floor_ = 0.0;
  mutable std::vector<double> weights_;
};

struct TunnelingResult {
  bool tunneling = false;
  std::optional<double> energy;
  std::optional<std::pair<BoxSpec, BoxSpec>> pair;
  std::string grid_meta;
  int stride = 1;
};

/// m-tunnelling: for some E on the grid two site-disjoint sub-boxes of side
/// `sub_side` are both (E,m)-S.
TunnelingResult is_mT(const BoxSpec& box, const ModelParams& params, const Potential& potential,
                      const EnergyGrid& grid, double m, int sub_side, int stride = 1);

/// Full box made of the two factor boxes (particles of `first` come first).
BoxSpec join_boxes(const BoxSpec& first, const BoxSpec& second);
/// Throws NotPIError if some particle of one factor can come within r0 of a
/// particle of the other, or if the hopping is not the l1 Kronecker sum.
void require_pi_factorisation(const BoxSpec& first, const BoxSpec& second, const ModelParams& params);

/// Sorted sums lambda_a + mu_b of the factor spectra.
std::vector<double> pi_tensor_spectrum(const BoxSpec& first, const BoxSpec& second, const ModelParams& params,
                                       const Potential& potential);

enum class ExpansionForm { automatic, over_first, over_second };

struct ExpansionResult {
  double value = 0.0;
  double bound = 0.0;  // |factor box summed over| * max |G_other(E - eigenvalue)|
  ExpansionForm form = ExpansionForm::over_first;
};

/// G(u, v; E) of the PI box assembled from the factor spectra: summing over
/// the eigenpairs of the first factor with direct-solve Green's functions of
/// the second (or mirrored).
ExpansionResult gf_eigen_expansion(const AssembledOperator& first_op, const AssembledOperator& second_op,
                                   const SpectralData& first, const SpectralData& second, double e,
                                   const Config& u, const Config& v, ExpansionForm form = ExpansionForm::automatic);

/// m' = m (1 - L^{-(1-beta)} - L^{-1} ln L^{N(d-1)}).
double pi_reduced_mass(double m, int side, int n_particles, int dim, double beta);

struct PIBoundCheck {
  bool hypotheses_met = false;  // E-CNR and both factors m-NT on the grid
  std::optional<bool> bound_holds;
  double reduced_mass = 0.0;
  double gf_max = 0.0;
};

PIBoundCheck check_pi_decay_bound(const BoxSpec& first, const BoxSpec& second, const ModelParams& params,
                                  const Potential& potential, double e, double m, int sub_side,
                                  const EnergyGrid& grid, double alpha, double beta, int stride = 1);

struct ClassificationOptions {
  double beta = 0.5;
  double alpha = 1.5;
  int cnr_stride = 1;
  std::optional<int> tunneling_side;  // compute m-T only when set
  EnergyGrid grid{-1.0, 1.0, 64};
  int tunneling_stride = 1;
};

struct ClassificationReport {
  BoxSpec box;
  double energy = 0.0;
  double mass = 0.0;
  bool ens = false;
  bool er = false;
  bool ecnr = false;
  bool fi = false;
  std::optional<bool> mt;
  NSResult ns;
  double nearest_eigenvalue = 0.0;
  CNRResult cnr;
  std::optional<TunnelingResult> tunneling;
  std::string grid_meta;
};

ClassificationReport classify(const BoxSpec& box, const ModelParams& params, const Potential& potential, double e,
                              double m, const ClassificationOptions& options = {});

}  // namespace mpal
