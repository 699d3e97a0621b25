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

// Multi-particle lattice geometry on Z^{Nd}: configurations, boxes, the
// interior boundary, single-particle projections, the widened diagonal,
// separability of box pairs and the cluster decomposition used by the
// covering construction.
//
// Particle indices are 0-based throughout the C++ API.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace mpal {

/// A single-particle position in Z^d.
using Point = std::vector<int>;

/// Lattice adjacency: sup-norm neighbours (3^{Nd}-1 of them) or
/// nearest neighbours in the l1 sense (2Nd of them).
enum class Adjacency { sup, l1 };

/// How single-particle boxes are linked into clusters: `overlap` merges two
/// particles when their boxes share a site, `touching` also merges boxes
/// that are sup-adjacent without sharing a site.
enum class ClusterRule { overlap, touching };

std::string to_string(Adjacency a);
Adjacency adjacency_from_string(const std::string& s);

/// An N-particle configuration x = (x_1, ..., x_N), x_j in Z^d, stored
/// particle-major.
class Config {
 public:
  Config() = default;
  Config(int n_particles, int dim, std::vector<int> coords);
  static Config from_points(const std::vector<Point>& points);

  int n() const noexcept { return n_; }
  int dim() const noexcept { return d_; }
  int operator()(int particle, int coord) const { return coords_[static_cast<std::size_t>(particle * d_ + coord)]; }
  std::span<const int> particle(int j) const {
    return {coords_.data() + static_cast<std::ptrdiff_t>(j) * d_, static_cast<std::size_t>(d_)};
  }
  Point point(int j) const;
  const std::vector<int>& coords() const noexcept { return coords_; }

  /// Sub-configuration made of the listed particles, in the listed order.
  Config select(std::span<const int> particles) const;

  friend bool operator==(const Config&, const Config&) = default;
  friend auto operator<=>(const Config&, const Config&) = default;

 private:
  int n_ = 0;
  int d_ = 0;
  std::vector<int> coords_;
};

std::string to_string(const Config& x);

/// The box Lambda_L(u): per coordinate the integers t with |t - u| <= L/2.
struct BoxSpec {
  Config center;
  int side = 1;

  BoxSpec() = default;
  BoxSpec(Config c, int l);

  int n() const noexcept { return center.n(); }
  int dim() const noexcept { return center.dim(); }
  int half() const noexcept { return side / 2; }
  int width() const noexcept { return 2 * half() + 1; }
  std::size_t site_count() const;
  bool contains(const Config& x) const;

  friend bool operator==(const BoxSpec&, const BoxSpec&) = default;
  friend auto operator<=>(const BoxSpec&, const BoxSpec&) = default;
};

/// Bijection between the sites of a box and 0..M-1 in lexicographic order of
/// the flattened coordinates (first coordinate most significant).
class SiteIndex {
 public:
  explicit SiteIndex(const BoxSpec& box);

  std::size_t size() const noexcept { return size_; }
  const BoxSpec& box() const noexcept { return box_; }
  /// Index of x, or size() when x lies outside the box.
  std::size_t index_of(std::span<const int> flat_coords) const;
  std::size_t index_of(const Config& x) const { return index_of(std::span<const int>(x.coords())); }
  Config config_at(std::size_t i) const;
  /// Writes the flattened coordinates of site i into out (size N*d).
  void coords_at(std::size_t i, std::span<int> out) const;

 private:
  BoxSpec box_;
  std::vector<int> lo_;
  int width_;
  std::size_t size_;
};

int sup_norm(std::span<const int> a, std::span<const int> b);
int sup_norm(const Config& a, const Config& b);

std::vector<Config> enumerate_sites(const BoxSpec& box);

/// Sites of the box having an outside neighbour at distance one under the
/// chosen adjacency.
std::vector<Config> boundary(const BoxSpec& box, Adjacency adjacency = Adjacency::sup);
bool on_boundary(const BoxSpec& box, const Config& x);

struct Projections {
  std::vector<BoxSpec> per_particle;  // single-particle boxes Lambda_L(u_j)
  std::vector<Point> base;            // sorted union of their site sets
};

Projections projections(const BoxSpec& box);

/// True iff every pairwise particle distance is at most N*R.
bool in_diagonal_set(const Config& x, int radius);
bool is_fully_interactive(const BoxSpec& box, int r0);

/// Single-particle boxes Lambda_L(a), Lambda_L(b) share a site.
bool cubes_intersect(std::span<const int> a, std::span<const int> b, int side);

/// box_y is J-separable from box_x: the projections of the particles in J
/// miss the projections of the remaining particles of box_y and all of box_x.
bool is_J_separable(const BoxSpec& box_y, const BoxSpec& box_x, std::span<const int> subset);
bool is_J_separable(const BoxSpec& box_y, const BoxSpec& box_x, std::uint32_t subset_mask);
bool is_separable_pair(const BoxSpec& a, const BoxSpec& b);

struct ClusterPartition {
  int radius = 0;
  std::vector<std::vector<int>> clusters;  // sorted blocks, ordered by first element
  friend bool operator==(const ClusterPartition&, const ClusterPartition&) = default;
};

ClusterPartition cluster_decomposition(const Config& y, int radius,
                                       ClusterRule rule = ClusterRule::overlap);

/// Boxes of side 5nL whose union contains every configuration y for which
/// Lambda_L(x), Lambda_L(y) are not separable. One box per assignment of
/// particles to the positions of x, duplicates removed.
std::vector<BoxSpec> covering_boxes(const Config& x, int side);

/// (S_sigma x)_j = x_{sigma(j)}.
Config apply_permutation(const Config& x, std::span<const int> sigma);
BoxSpec apply_permutation(const BoxSpec& box, std::span<const int> sigma);
std::vector<int> inverse_permutation(std::span<const int> sigma);

/// Exhaustive check of the covering construction: every y with coordinates in
/// [-range, range] that lies outside all covering boxes of x must give a
/// separable pair.
struct CoveringCheck {
  std::size_t boxes = 0;
  std::size_t checked = 0;
  std::size_t outside = 0;
  std::size_t violations = 0;
  std::vector<Config> examples;  // first few violating y
};

CoveringCheck check_covering(const Config& x, int side, int range);

/// Samples pairs of separable FI boxes whose centres are more than 8L apart
/// (sup norm) and counts the pairs whose projections meet.
struct DistantFICheck {
  std::size_t pairs = 0;
  std::size_t rejected = 0;  // draws that failed the FI, distance or separability filter
  std::size_t violations = 0;
};

DistantFICheck check_distant_fi_projections(int n, int dim, int side, int r0, std::size_t pairs, std::uint64_t seed);

}  // namespace mpal
