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

// Random potentials, two-body interactions and assembly of the Dirichlet
// restriction of the N-particle Hamiltonian
//
//   (H phi)(x) = sum_{y in box, |y - x| = 1} phi(y) + [U(x) + g W(x)] phi(x),
//   W(x) = sum_j V(x_j),  U(x) = sum_{j1 < j2} Phi(x_j1, x_j2).

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "mpal/geometry.hpp"
#include "mpal/rng.hpp"

namespace mpal {

/// IID single-site distribution plus the master seed of the counter-based
/// generator. (seed, realization, site) fully determines V(site).
struct DisorderModel {
  enum class Kind { uniform01, gaussian, table };

  Kind kind = Kind::uniform01;
  double mean = 0.0;  // gaussian
  double sd = 1.0;    // gaussian
  std::vector<double> values;         // table
  std::vector<double> probabilities;  // table
  double smear = 0.0;                 // table: width of the uniform jitter added to each atom
  std::uint64_t master_seed = 0;

  static DisorderModel uniform(std::uint64_t seed);
  static DisorderModel gaussian(double mean, double sd, std::uint64_t seed);
  static DisorderModel table(std::vector<double> values, std::vector<double> probabilities, double smear,
                             std::uint64_t seed);

  /// Throws on malformed parameters; returns human-readable warnings
  /// (a table without smear has atoms).
  std::vector<std::string> validate() const;
  double draw(const PhiloxCounter& words) const;
};

std::string to_string(DisorderModel::Kind k);
DisorderModel::Kind disorder_kind_from_string(const std::string& s);

struct PointHash {
  std::size_t operator()(const Point& p) const noexcept;
};

/// Finite map site -> V(site).
class Potential {
 public:
  void set(const Point& p, double v) { values_[p] = v; }
  bool contains(const Point& p) const { return values_.count(p) != 0; }
  /// Throws IncompletePotentialError when p is absent.
  double at(std::span<const int> p) const;
  std::size_t size() const noexcept { return values_.size(); }
  const std::unordered_map<Point, double, PointHash>& values() const noexcept { return values_; }

 private:
  std::unordered_map<Point, double, PointHash> values_;
};

/// V(p) for one site; d <= 3 and realization < 2^32.
double sample_site(const DisorderModel& model, std::span<const int> p, std::uint64_t realization);
Potential sample_potential(const DisorderModel& model, std::span<const Point> region, std::uint64_t realization);
/// Potential on the single-particle base of every listed box.
Potential sample_for_boxes(const DisorderModel& model, std::span<const BoxSpec> boxes, std::uint64_t realization);
Potential sample_for_box(const DisorderModel& model, const BoxSpec& box, std::uint64_t realization);

/// Radial two-body potential: Phi(x, x') = radial[|x - x'|] for |x - x'| <= r0, else 0.
struct InteractionSpec {
  int r0 = 0;
  std::vector<double> radial{0.0};

  static InteractionSpec none();
  static InteractionSpec constant(int r0, double u0);
  static InteractionSpec table(std::vector<double> radial);

  double phi(std::span<const int> a, std::span<const int> b) const;
  double sup_abs() const;
};

double interaction_energy(const Config& x, const InteractionSpec& spec);

struct ModelParams {
  int dim = 1;
  int n_particles = 1;
  double g = 1.0;
  DisorderModel disorder;
  InteractionSpec interaction;
  Adjacency adjacency = Adjacency::sup;
  std::size_t dense_threshold = 4096;  // sites; sparse storage at or above

  /// Same model restricted to n particles (factor boxes of PI boxes).
  ModelParams with_particles(int n) const;
  void validate() const;
};

/// Relative neighbour offsets of the chosen adjacency in Z^{k}.
std::vector<std::vector<int>> neighbour_offsets(int k, Adjacency adjacency);

class AssembledOperator {
 public:
  using Dense = Eigen::MatrixXd;
  using Sparse = Eigen::SparseMatrix<double, Eigen::RowMajor>;

  AssembledOperator(BoxSpec box, Adjacency adjacency, Dense m);
  AssembledOperator(BoxSpec box, Adjacency adjacency, Sparse m);

  const BoxSpec& box() const noexcept { return box_; }
  const SiteIndex& sites() const noexcept { return index_; }
  Adjacency adjacency() const noexcept { return adjacency_; }
  std::size_t size() const noexcept { return index_.size(); }
  bool is_dense() const noexcept { return std::holds_alternative<Dense>(matrix_); }
  const Dense& dense() const { return std::get<Dense>(matrix_); }
  const Sparse& sparse() const { return std::get<Sparse>(matrix_); }
  Dense to_dense() const;
  double diagonal(std::size_t i) const;
  /// Largest number of off-diagonal nonzeros in a row.
  int max_degree() const;
  /// Nonzero entries (row, col, value), row-major order.
  std::vector<Eigen::Triplet<double>> entries() const;

 private:
  BoxSpec box_;
  SiteIndex index_;
  Adjacency adjacency_;
  std::variant<Dense, Sparse> matrix_;
};

AssembledOperator assemble(const BoxSpec& box, const ModelParams& params, const Potential& potential);
/// Hamiltonian of the permuted box S_sigma(box) with the same potential.
AssembledOperator assemble_permuted(const BoxSpec& box, std::span<const int> sigma, const ModelParams& params,
                                    const Potential& potential);

/// Matrix Market coordinate export, 1-based indices, 17 significant digits.
/// A non-empty comment becomes a single '%' line after the banner.
void write_coordinate(std::ostream& os, const AssembledOperator& op, const std::string& comment = {});

}  // namespace mpal
