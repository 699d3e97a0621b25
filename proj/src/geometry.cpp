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

#include "mpal/geometry.hpp"

#include <algorithm>
#include <cstdlib>
#include <numeric>
#include <set>
#include <sstream>

#include "mpal/errors.hpp"
#include "mpal/rng.hpp"

namespace mpal {

std::string to_string(Adjacency a) { return a == Adjacency::sup ? "sup" : "l1"; }

Adjacency adjacency_from_string(const std::string& s) {
  if (s == "sup") return Adjacency::sup;
  if (s == "l1") return Adjacency::l1;
  throw Error("unknown adjacency '" + s + "' (expected sup or l1)");
}

Config::Config(int n_particles, int dim, std::vector<int> coords)
    : n_(n_particles), d_(dim), coords_(std::move(coords)) {
  if (n_ < 1 || d_ < 1) throw DimensionError("configuration needs N >= 1 and d >= 1");
  if (coords_.size() != static_cast<std::size_t>(n_ * d_)) {
    throw DimensionError("configuration has " + std::to_string(coords_.size()) +
                         " coordinates, expected N*d = " + std::to_string(n_ * d_));
  }
}

Config Config::from_points(const std::vector<Point>& points) {
  if (points.empty()) throw DimensionError("configuration needs at least one particle");
  const auto d = points.front().size();
  std::vector<int> flat;
  flat.reserve(points.size() * d);
  for (const auto& p : points) {
    if (p.size() != d) throw DimensionError("particles of a configuration must share the lattice dimension");
    flat.insert(flat.end(), p.begin(), p.end());
  }
  return Config(static_cast<int>(points.size()), static_cast<int>(d), std::move(flat));
}

Point Config::point(int j) const {
  auto p = particle(j);
  return Point(p.begin(), p.end());
}

Config Config::select(std::span<const int> particles) const {
  std::vector<int> flat;
  flat.reserve(particles.size() * static_cast<std::size_t>(d_));
  for (int j : particles) {
    auto p = particle(j);
    flat.insert(flat.end(), p.begin(), p.end());
  }
  return Config(static_cast<int>(particles.size()), d_, std::move(flat));
}

std::string to_string(const Config& x) {
  std::ostringstream os;
  os << '(';
  for (int j = 0; j < x.n(); ++j) {
    if (j) os << ',';
    os << '(';
    for (int i = 0; i < x.dim(); ++i) {
      if (i) os << ',';
      os << x(j, i);
    }
    os << ')';
  }
  os << ')';
  return os.str();
}

BoxSpec::BoxSpec(Config c, int l) : center(std::move(c)), side(l) {
  if (side < 1) throw DimensionError("box side must be positive");
}

std::size_t BoxSpec::site_count() const {
  std::size_t count = 1;
  const auto w = static_cast<std::size_t>(width());
  for (int k = 0; k < n() * dim(); ++k) count *= w;
  return count;
}

bool BoxSpec::contains(const Config& x) const {
  if (x.n() != n() || x.dim() != dim()) return false;
  return sup_norm(x, center) <= half();
}

SiteIndex::SiteIndex(const BoxSpec& box) : box_(box), width_(box.width()), size_(box.site_count()) {
  lo_.reserve(box.center.coords().size());
  for (int c : box.center.coords()) lo_.push_back(c - box.half());
}

std::size_t SiteIndex::index_of(std::span<const int> flat) const {
  if (flat.size() != lo_.size()) return size_;
  std::size_t idx = 0;
  for (std::size_t k = 0; k < lo_.size(); ++k) {
    const int digit = flat[k] - lo_[k];
    if (digit < 0 || digit >= width_) return size_;
    idx = idx * static_cast<std::size_t>(width_) + static_cast<std::size_t>(digit);
  }
  return idx;
}

void SiteIndex::coords_at(std::size_t i, std::span<int> out) const {
  for (std::size_t k = lo_.size(); k-- > 0;) {
    out[k] = lo_[k] + static_cast<int>(i % static_cast<std::size_t>(width_));
    i /= static_cast<std::size_t>(width_);
  }
}

Config SiteIndex::config_at(std::size_t i) const {
  std::vector<int> flat(lo_.size());
  coords_at(i, flat);
  return Config(box_.n(), box_.dim(), std::move(flat));
}

int sup_norm(std::span<const int> a, std::span<const int> b) {
  if (a.size() != b.size()) throw DimensionError("sup_norm: operands differ in size");
  int m = 0;
  for (std::size_t k = 0; k < a.size(); ++k) m = std::max(m, std::abs(a[k] - b[k]));
  return m;
}

int sup_norm(const Config& a, const Config& b) {
  if (a.n() != b.n() || a.dim() != b.dim()) {
    throw DimensionError("sup_norm: configurations differ in (N, d)");
  }
  return sup_norm(std::span<const int>(a.coords()), std::span<const int>(b.coords()));
}

std::vector<Config> enumerate_sites(const BoxSpec& box) {
  const SiteIndex index(box);
  std::vector<Config> sites;
  sites.reserve(index.size());
  for (std::size_t i = 0; i < index.size(); ++i) sites.push_back(index.config_at(i));
  return sites;
}

bool on_boundary(const BoxSpec& box, const Config& x) {
  // Both adjacencies can leave the box through any face, so the interior
  // boundary is the outermost shell in either case.
  for (std::size_t k = 0; k < x.coords().size(); ++k) {
    if (std::abs(x.coords()[k] - box.center.coords()[k]) == box.half()) return true;
  }
  return false;
}

std::vector<Config> boundary(const BoxSpec& box, Adjacency /*adjacency*/) {
  std::vector<Config> out;
  for (auto& x : enumerate_sites(box)) {
    if (on_boundary(box, x)) out.push_back(std::move(x));
  }
  return out;
}

Projections projections(const BoxSpec& box) {
  Projections p;
  std::set<Point> base;
  for (int j = 0; j < box.n(); ++j) {
    BoxSpec single(Config(1, box.dim(), box.center.point(j)), box.side);
    for (const auto& s : enumerate_sites(single)) base.insert(s.point(0));
    p.per_particle.push_back(std::move(single));
  }
  p.base.assign(base.begin(), base.end());
  return p;
}

bool in_diagonal_set(const Config& x, int radius) {
  const long bound = static_cast<long>(x.n()) * radius;
  for (int a = 0; a < x.n(); ++a) {
    for (int b = a + 1; b < x.n(); ++b) {
      if (sup_norm(x.particle(a), x.particle(b)) > bound) return false;
    }
  }
  return true;
}

bool is_fully_interactive(const BoxSpec& box, int r0) {
  // The sup-norm decouples the coordinates: a box point with every pairwise
  // spread <= N*r0 exists iff, coordinate by coordinate, the particle
  // intervals [u - h, u + h] can all be hit inside a window of length N*r0.
  const long bound = static_cast<long>(box.n()) * r0;
  for (int i = 0; i < box.dim(); ++i) {
    int lo = box.center(0, i), hi = lo;
    for (int j = 1; j < box.n(); ++j) {
      lo = std::min(lo, box.center(j, i));
      hi = std::max(hi, box.center(j, i));
    }
    if (static_cast<long>(hi - lo) - 2L * box.half() > bound) return false;
  }
  return true;
}

bool cubes_intersect(std::span<const int> a, std::span<const int> b, int side) {
  return sup_norm(a, b) <= 2 * (side / 2);
}

namespace {

void require_same_shape(const BoxSpec& a, const BoxSpec& b) {
  if (a.n() != b.n() || a.dim() != b.dim() || a.side != b.side) {
    throw DimensionError("boxes must share particle count, dimension and side");
  }
  if (a.n() > 31) throw DimensionError("at most 31 particles are supported by subset masks");
}

}  // namespace

bool is_J_separable(const BoxSpec& box_y, const BoxSpec& box_x, std::uint32_t mask) {
  require_same_shape(box_y, box_x);
  const int n = box_y.n();
  bool any = false;
  for (int j = 0; j < n; ++j) {
    if (!(mask >> j & 1u)) continue;
    any = true;
    const auto yj = box_y.center.particle(j);
    for (int i = 0; i < n; ++i) {
      if (!(mask >> i & 1u) && cubes_intersect(yj, box_y.center.particle(i), box_y.side)) return false;
      if (cubes_intersect(yj, box_x.center.particle(i), box_y.side)) return false;
    }
  }
  if (!any) throw Error("is_J_separable: the particle subset must be nonempty");
  return true;
}

bool is_J_separable(const BoxSpec& box_y, const BoxSpec& box_x, std::span<const int> subset) {
  std::uint32_t mask = 0;
  for (int j : subset) {
    if (j < 0 || j >= box_y.n()) throw DimensionError("particle index out of range in subset");
    mask |= 1u << j;
  }
  return is_J_separable(box_y, box_x, mask);
}

bool is_separable_pair(const BoxSpec& a, const BoxSpec& b) {
  require_same_shape(a, b);
  const std::uint32_t full = (1u << a.n()) - 1u;
  for (std::uint32_t mask = 1; mask <= full; ++mask) {
    if (is_J_separable(b, a, mask) || is_J_separable(a, b, mask)) return true;
  }
  return false;
}

ClusterPartition cluster_decomposition(const Config& y, int radius, ClusterRule rule) {
  const int n = y.n();
  std::vector<int> parent(static_cast<std::size_t>(n));
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int v) {
    while (parent[static_cast<std::size_t>(v)] != v) {
      parent[static_cast<std::size_t>(v)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(v)])];
      v = parent[static_cast<std::size_t>(v)];
    }
    return v;
  };
  const int reach = 2 * (radius / 2) + (rule == ClusterRule::touching ? 1 : 0);
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      if (sup_norm(y.particle(a), y.particle(b)) <= reach) {
        const int ra = find(a), rb = find(b);
        if (ra != rb) parent[static_cast<std::size_t>(std::max(ra, rb))] = std::min(ra, rb);
      }
    }
  }
  ClusterPartition out{radius, {}};
  std::vector<int> slot(static_cast<std::size_t>(n), -1);
  for (int j = 0; j < n; ++j) {
    const int r = find(j);
    if (slot[static_cast<std::size_t>(r)] < 0) {
      slot[static_cast<std::size_t>(r)] = static_cast<int>(out.clusters.size());
      out.clusters.emplace_back();
    }
    out.clusters[static_cast<std::size_t>(slot[static_cast<std::size_t>(r)])].push_back(j);
  }
  return out;
}

std::vector<BoxSpec> covering_boxes(const Config& x, int side) {
  const int n = x.n();
  const int big = 5 * n * side;
  std::set<BoxSpec> boxes;
  std::vector<int> assignment(static_cast<std::size_t>(n), 0);
  for (;;) {
    boxes.emplace(x.select(assignment), big);
    int k = n - 1;
    while (k >= 0 && ++assignment[static_cast<std::size_t>(k)] == n) {
      assignment[static_cast<std::size_t>(k)] = 0;
      --k;
    }
    if (k < 0) break;
  }
  return {boxes.begin(), boxes.end()};
}

std::vector<int> inverse_permutation(std::span<const int> sigma) {
  std::vector<int> inv(sigma.size(), -1);
  for (std::size_t j = 0; j < sigma.size(); ++j) {
    const int s = sigma[j];
    if (s < 0 || static_cast<std::size_t>(s) >= sigma.size() || inv[static_cast<std::size_t>(s)] != -1) {
      throw Error("permutation must be a bijection on 0..N-1");
    }
    inv[static_cast<std::size_t>(s)] = static_cast<int>(j);
  }
  return inv;
}

Config apply_permutation(const Config& x, std::span<const int> sigma) {
  if (sigma.size() != static_cast<std::size_t>(x.n())) {
    throw DimensionError("permutation length differs from particle count");
  }
  (void)inverse_permutation(sigma);  // validates bijectivity
  return x.select(sigma);
}

BoxSpec apply_permutation(const BoxSpec& box, std::span<const int> sigma) {
  return BoxSpec(apply_permutation(box.center, sigma), box.side);
}

CoveringCheck check_covering(const Config& x, int side, int range) {
  if (range < 0) throw Error("range must be non-negative");
  CoveringCheck out;
  const auto cover = covering_boxes(x, side);
  out.boxes = cover.size();
  const BoxSpec bx(x, side);
  const std::size_t k = x.coords().size();
  std::vector<int> flat(k, -range);
  for (;;) {
    const Config y(x.n(), x.dim(), flat);
    ++out.checked;
    const bool covered = std::any_of(cover.begin(), cover.end(), [&](const BoxSpec& b) { return b.contains(y); });
    if (!covered) {
      ++out.outside;
      if (!is_separable_pair(bx, BoxSpec(y, side))) {
        ++out.violations;
        if (out.examples.size() < 8) out.examples.push_back(y);
      }
    }
    std::size_t i = k;
    while (i-- > 0) {
      if (++flat[i] <= range) break;
      flat[i] = -range;
      if (i == 0) return out;
    }
  }
}

namespace {

// Integer in [lo, hi] from one Philox word pair.
int draw_int(std::uint32_t a, std::uint32_t b, int lo, int hi) {
  const double u = unit_double(a, b);
  return lo + std::min(hi - lo, static_cast<int>(u * (hi - lo + 1)));
}

}  // namespace

DistantFICheck check_distant_fi_projections(int n, int dim, int side, int r0, std::size_t pairs, std::uint64_t seed) {
  if (n < 1 || dim < 1 || side < 1 || r0 < 0) throw Error("invalid FI sampling parameters");
  DistantFICheck out;
  const PhiloxKey key{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
  const int h = side / 2;
  const int spread = n * r0 + 2 * h;  // widest particle spread of an FI box
  const auto words = static_cast<std::size_t>(4 * n * dim + 3 * dim);  // two per integer, one per sign
  std::uint32_t draw = 0;
  while (out.pairs < pairs) {
    std::vector<std::uint32_t> w;
    for (std::uint32_t block = 0; w.size() < words; ++block) {
      const auto r = philox4x32_10({draw, block, 0x6d706c31u, 0}, key);
      w.insert(w.end(), r.begin(), r.end());
    }
    ++draw;
    std::size_t next = 0;
    auto pick = [&](int lo, int hi) {
      const int v = draw_int(w[next], w[next + 1], lo, hi);
      next += 2;
      return v;
    };
    std::vector<int> a(static_cast<std::size_t>(n * dim)), b(a.size());
    for (int j = 0; j < n; ++j) {
      for (int i = 0; i < dim; ++i) a[static_cast<std::size_t>(j * dim + i)] = pick(0, spread);
    }
    std::vector<int> shift(static_cast<std::size_t>(dim));
    for (int i = 0; i < dim; ++i) {
      const int mag = pick(8 * side + 1, 12 * side + spread);
      shift[static_cast<std::size_t>(i)] = (w[next++] & 1U) ? mag : -mag;
    }
    for (int j = 0; j < n; ++j) {
      for (int i = 0; i < dim; ++i) {
        b[static_cast<std::size_t>(j * dim + i)] = shift[static_cast<std::size_t>(i)] + pick(0, spread);
      }
    }
    const BoxSpec first(Config(n, dim, a), side);
    const BoxSpec second(Config(n, dim, b), side);
    if (!is_fully_interactive(first, r0) || !is_fully_interactive(second, r0) ||
        sup_norm(first.center, second.center) <= 8 * side || !is_separable_pair(first, second)) {
      ++out.rejected;
      continue;
    }
    ++out.pairs;
    bool meet = false;
    for (int j = 0; j < n && !meet; ++j) {
      for (int k = 0; k < n && !meet; ++k) meet = cubes_intersect(first.center.particle(j), second.center.particle(k), side);
    }
    if (meet) ++out.violations;
  }
  return out;
}

}  // namespace mpal
