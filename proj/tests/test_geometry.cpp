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

#include <algorithm>
#include <map>
#include <numeric>
#include <random>
#include <set>

#include "doctest.h"
#include "mpal/errors.hpp"
#include "mpal/geometry.hpp"

using namespace mpal;

namespace {

Config c1(std::initializer_list<int> xs) { return Config(static_cast<int>(xs.size()), 1, std::vector<int>(xs)); }

// Site set of the single-particle cube of side L around p, by brute force.
std::set<std::vector<int>> cube_sites(std::span<const int> p, int side) {
  std::set<std::vector<int>> out;
  const int h = side / 2;
  std::vector<int> cur(p.begin(), p.end());
  std::vector<int> off(p.size(), -h);
  for (;;) {
    for (std::size_t i = 0; i < p.size(); ++i) cur[i] = p[i] + off[i];
    out.insert(cur);
    std::size_t i = p.size();
    while (i-- > 0) {
      if (++off[i] <= h) break;
      off[i] = -h;
      if (i == 0) return out;
    }
  }
}

bool sets_meet(const std::set<std::vector<int>>& a, const std::set<std::vector<int>>& b) {
  return std::any_of(a.begin(), a.end(), [&](const auto& s) { return b.count(s) != 0; });
}

// Literal set reading of J-separability.
bool oracle_J_separable(const BoxSpec& y, const BoxSpec& x, std::uint32_t mask) {
  std::set<std::vector<int>> in, rest;
  for (int j = 0; j < y.n(); ++j) {
    auto s = cube_sites(y.center.particle(j), y.side);
    (mask >> j & 1u ? in : rest).insert(s.begin(), s.end());
  }
  for (int j = 0; j < x.n(); ++j) {
    auto s = cube_sites(x.center.particle(j), x.side);
    rest.insert(s.begin(), s.end());
  }
  return !sets_meet(in, rest);
}

bool oracle_separable(const BoxSpec& a, const BoxSpec& b) {
  for (std::uint32_t m = 1; m < (1u << a.n()); ++m) {
    if (oracle_J_separable(b, a, m) || oracle_J_separable(a, b, m)) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("sup_norm examples and metric axioms") {
  CHECK(sup_norm(c1({0, 0}), c1({1, -2})) == 2);
  CHECK(sup_norm(c1({4, 4}), c1({4, 4})) == 0);
  CHECK(sup_norm(Config(1, 2, {0, 0}), Config(1, 2, {3, -5})) == 5);
  CHECK_THROWS_AS(sup_norm(c1({0}), c1({0, 1})), DimensionError);

  std::mt19937 rng(1);
  std::uniform_int_distribution<int> u(-20, 20);
  for (int t = 0; t < 500; ++t) {
    Config a(2, 2, {u(rng), u(rng), u(rng), u(rng)});
    Config b(2, 2, {u(rng), u(rng), u(rng), u(rng)});
    Config c(2, 2, {u(rng), u(rng), u(rng), u(rng)});
    CHECK(sup_norm(a, b) == sup_norm(b, a));
    CHECK(sup_norm(a, c) <= sup_norm(a, b) + sup_norm(b, c));
    CHECK((sup_norm(a, b) == 0) == (a == b));
  }
}

TEST_CASE("box site sets") {
  const auto s = enumerate_sites(BoxSpec(c1({0}), 2));
  REQUIRE(s.size() == 3);
  CHECK(s[0] == c1({-1}));
  CHECK(s[1] == c1({0}));
  CHECK(s[2] == c1({1}));
  CHECK(enumerate_sites(BoxSpec(c1({0, 0}), 2)).size() == 9);
  CHECK(enumerate_sites(BoxSpec(Config(1, 2, {0, 0}), 4)).size() == 25);
  // Odd and even sides share the 2*floor(L/2)+1 rule.
  CHECK(BoxSpec(c1({0}), 3).width() == 3);
  CHECK(BoxSpec(c1({0}), 5).width() == 5);
  CHECK(BoxSpec(c1({0, 0, 0}), 4).site_count() == 125);

  const BoxSpec box(Config(2, 2, {1, -1, 3, 0}), 3);
  const auto sites = enumerate_sites(box);
  CHECK(std::is_sorted(sites.begin(), sites.end()));
  const SiteIndex idx(box);
  for (std::size_t i = 0; i < sites.size(); ++i) {
    CHECK(idx.index_of(sites[i]) == i);
    CHECK(idx.config_at(i) == sites[i]);
  }
  CHECK(idx.index_of(Config(2, 2, {9, 9, 9, 9})) == idx.size());
}

TEST_CASE("boundary is the set of sites with an outside neighbour") {
  CHECK(boundary(BoxSpec(c1({0}), 2)) == std::vector<Config>{c1({-1}), c1({1})});
  CHECK(boundary(BoxSpec(Config(1, 2, {0, 0}), 2)).size() == 8);
  const auto b2 = boundary(BoxSpec(c1({0, 0}), 2));
  CHECK(b2.size() == 8);
  CHECK(std::find(b2.begin(), b2.end(), c1({0, 0})) == b2.end());

  for (Adjacency adj : {Adjacency::sup, Adjacency::l1}) {
    for (const BoxSpec& box : {BoxSpec(c1({0, 3}), 4), BoxSpec(Config(1, 2, {1, 1}), 3), BoxSpec(c1({0, 0, 0}), 2)}) {
      const auto sites = enumerate_sites(box);
      const auto bd = boundary(box, adj);
      CHECK(bd.size() < sites.size());
      const std::size_t k = box.center.coords().size();
      for (const auto& y : sites) {
        // Brute force: does some neighbour at distance one leave the box?
        bool outside = false;
        for (std::size_t i = 0; i < k && !outside; ++i) {
          for (int s : {-1, 1}) {
            auto c = y.coords();
            c[i] += s;
            outside = outside || !box.contains(Config(box.n(), box.dim(), c));
          }
        }
        const bool listed = std::find(bd.begin(), bd.end(), y) != bd.end();
        CHECK(listed == outside);
        CHECK(on_boundary(box, y) == outside);
      }
    }
  }
}

TEST_CASE("projections") {
  auto p = projections(BoxSpec(c1({0, 10}), 2));
  REQUIRE(p.per_particle.size() == 2);
  CHECK(p.per_particle[1].center == c1({10}));
  CHECK(p.base == std::vector<Point>{{-1}, {0}, {1}, {9}, {10}, {11}});
  CHECK(projections(BoxSpec(c1({0, 1}), 2)).base == std::vector<Point>{{-1}, {0}, {1}, {2}});
  CHECK(projections(BoxSpec(c1({0, 0, 5}), 2)).base.size() == 6);
}

TEST_CASE("diagonal set and interactivity") {
  CHECK_FALSE(in_diagonal_set(c1({0, 3}), 1));
  CHECK(in_diagonal_set(c1({0, 2}), 1));
  CHECK(in_diagonal_set(c1({17}), 0));
  CHECK(is_fully_interactive(BoxSpec(c1({0, 0}), 2), 1));
  CHECK_FALSE(is_fully_interactive(BoxSpec(c1({0, 100}), 2), 1));
  CHECK(is_fully_interactive(BoxSpec(c1({0, 4}), 2), 1));

  // Analytic FI test against enumeration of the site set.
  std::mt19937 rng(2);
  std::uniform_int_distribution<int> u(-6, 6);
  for (int t = 0; t < 300; ++t) {
    const int n = 2 + t % 2;
    std::vector<int> c(static_cast<std::size_t>(n));
    for (auto& v : c) v = u(rng);
    const BoxSpec box(Config(n, 1, c), 1 + t % 4);
    const int r0 = t % 3;
    const auto sites = enumerate_sites(box);
    const bool brute = std::any_of(sites.begin(), sites.end(), [&](const Config& x) { return in_diagonal_set(x, r0); });
    CHECK(is_fully_interactive(box, r0) == brute);
    const std::vector<int> rev = n == 2 ? std::vector<int>{1, 0} : std::vector<int>{2, 0, 1};
    CHECK(in_diagonal_set(box.center, r0) == in_diagonal_set(apply_permutation(box.center, rev), r0));
  }
}

TEST_CASE("J-separability examples") {
  const std::vector<int> first{0};
  CHECK(is_J_separable(BoxSpec(c1({0, 100}), 2), BoxSpec(c1({50, 60}), 2), first));
  const BoxSpec same(c1({3, 8}), 2);
  CHECK_FALSE(is_J_separable(same, same, std::vector<int>{0, 1}));
  CHECK_FALSE(is_J_separable(BoxSpec(c1({0, 2}), 2), BoxSpec(c1({100, 200}), 2), first));
  CHECK_THROWS(is_J_separable(same, same, std::uint32_t{0}));

  CHECK_FALSE(is_separable_pair(same, same));
  CHECK(is_separable_pair(BoxSpec(c1({0, 0}), 2), BoxSpec(c1({100, 200}), 2)));
  const BoxSpec a(c1({0, 0}), 2), b(c1({0, 200}), 2);
  CHECK(is_separable_pair(a, b));
  CHECK(is_J_separable(b, a, std::vector<int>{1}));
}

TEST_CASE("separability agrees with the literal set definition and is symmetric") {
  std::mt19937 rng(3);
  for (int t = 0; t < 400; ++t) {
    const int n = 1 + t % 3;
    const int d = 1 + (t / 3) % 2;
    const int side = 1 + t % 4;
    std::uniform_int_distribution<int> u(-8, 8);
    std::vector<int> ca(static_cast<std::size_t>(n * d)), cb(ca.size());
    for (auto& v : ca) v = u(rng);
    for (auto& v : cb) v = u(rng);
    const BoxSpec a(Config(n, d, ca), side), b(Config(n, d, cb), side);
    const bool s = is_separable_pair(a, b);
    CHECK(s == oracle_separable(a, b));
    CHECK(s == is_separable_pair(b, a));
    for (std::uint32_t m = 1; m < (1u << n); ++m) CHECK(is_J_separable(b, a, m) == oracle_J_separable(b, a, m));
  }
}

TEST_CASE("cluster decomposition") {
  CHECK(cluster_decomposition(c1({0, 100}), 2).clusters == std::vector<std::vector<int>>{{0}, {1}});
  CHECK(cluster_decomposition(c1({0, 1}), 2).clusters == std::vector<std::vector<int>>{{0, 1}});
  CHECK(cluster_decomposition(c1({0, 3, 100}), 2).clusters == std::vector<std::vector<int>>{{0}, {1}, {2}});
  CHECK(cluster_decomposition(c1({0, 3, 100}), 2, ClusterRule::touching).clusters ==
        std::vector<std::vector<int>>{{0, 1}, {2}});

  // Blocks: overlapping cubes inside one block are chained, distinct blocks are disjoint.
  std::mt19937 rng(4);
  std::uniform_int_distribution<int> u(-15, 15);
  for (int t = 0; t < 200; ++t) {
    const int n = 2 + t % 4;
    std::vector<int> c(static_cast<std::size_t>(n));
    for (auto& v : c) v = u(rng);
    const Config y(n, 1, c);
    const int R = 1 + t % 5;
    const auto part = cluster_decomposition(y, R);
    std::vector<int> block(static_cast<std::size_t>(n), -1);
    for (std::size_t b = 0; b < part.clusters.size(); ++b) {
      for (int j : part.clusters[b]) {
        CHECK(block[static_cast<std::size_t>(j)] == -1);
        block[static_cast<std::size_t>(j)] = static_cast<int>(b);
      }
    }
    for (int i = 0; i < n; ++i) {
      CHECK(block[static_cast<std::size_t>(i)] >= 0);
      for (int j = 0; j < n; ++j) {
        if (block[static_cast<std::size_t>(i)] == block[static_cast<std::size_t>(j)]) continue;
        CHECK_FALSE(sets_meet(cube_sites(y.particle(i), R), cube_sites(y.particle(j), R)));
      }
    }
    // Relabelling particles relabels blocks.
    std::vector<int> sigma(static_cast<std::size_t>(n));
    std::iota(sigma.begin(), sigma.end(), 0);
    std::shuffle(sigma.begin(), sigma.end(), rng);
    const auto moved = cluster_decomposition(apply_permutation(y, sigma), R);
    std::vector<int> moved_block(static_cast<std::size_t>(n));
    for (std::size_t b = 0; b < moved.clusters.size(); ++b) {
      for (int j : moved.clusters[b]) moved_block[static_cast<std::size_t>(j)] = static_cast<int>(b);
    }
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        const bool together = block[static_cast<std::size_t>(sigma[static_cast<std::size_t>(i)])] ==
                              block[static_cast<std::size_t>(sigma[static_cast<std::size_t>(j)])];
        CHECK(together == (moved_block[static_cast<std::size_t>(i)] == moved_block[static_cast<std::size_t>(j)]));
      }
    }
  }
}

TEST_CASE("covering boxes") {
  const auto one = covering_boxes(c1({4}), 3);
  REQUIRE(one.size() == 1);
  CHECK(one[0].side == 15);
  CHECK(one[0].center == c1({4}));

  const auto same = covering_boxes(c1({0, 0}), 2);
  CHECK(same.size() <= 2);  // n^n / n! = 2 when the centres coincide
  for (const auto& b : same) CHECK(b.side <= 20);

  // Distinct centres give one box per assignment of particles to centres.
  CHECK(covering_boxes(c1({0, 7}), 2).size() == 4);
}

TEST_CASE("covering implication holds exhaustively for small cases") {
  for (int side : {1, 2, 3}) {
    for (const Config& x : {c1({0, 0}), c1({0, 7}), c1({-3, 2})}) {
      const auto r = check_covering(x, side, 30);
      CHECK(r.checked == 61u * 61u);
      CHECK(r.outside > 0);
      CHECK(r.violations == 0);
    }
    const auto r3 = check_covering(c1({0, 2, 9}), side, 14);
    CHECK(r3.violations == 0);
  }
}

TEST_CASE("distant separable FI boxes have disjoint projections") {
  for (int side : {2, 3, 4}) {
    const auto r = check_distant_fi_projections(2, 1, side, 1, 2000, 99);
    CHECK(r.pairs == 2000);
    CHECK(r.violations == 0);
  }
  const auto r2 = check_distant_fi_projections(3, 2, 2, 1, 500, 7);
  CHECK(r2.violations == 0);
}

TEST_CASE("permutations") {
  const Config x = c1({0, 5});
  const std::vector<int> id{0, 1}, swap{1, 0};
  CHECK(apply_permutation(x, id) == x);
  CHECK(apply_permutation(x, swap) == c1({5, 0}));
  CHECK(apply_permutation(apply_permutation(x, swap), swap) == x);
  const Config y = c1({3, -1, 8});
  const std::vector<int> s{2, 0, 1};
  CHECK(apply_permutation(apply_permutation(y, s), inverse_permutation(s)) == y);
  CHECK_THROWS(apply_permutation(y, std::vector<int>{0, 0, 1}));
  CHECK_THROWS_AS(apply_permutation(y, std::vector<int>{0, 1}), DimensionError);
}
