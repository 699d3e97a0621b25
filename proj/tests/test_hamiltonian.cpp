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
#include <cmath>
#include <random>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "doctest.h"
#include "mpal/errors.hpp"
#include "mpal/hamiltonian.hpp"

using namespace mpal;

namespace {

Config c1(std::initializer_list<int> xs) { return Config(static_cast<int>(xs.size()), 1, std::vector<int>(xs)); }

ModelParams model(int n, int d, double g, Adjacency adj = Adjacency::sup, std::uint64_t seed = 5) {
  ModelParams p;
  p.dim = d;
  p.n_particles = n;
  p.g = g;
  p.disorder = DisorderModel::uniform(seed);
  p.interaction = InteractionSpec::constant(1, 1.0);
  p.adjacency = adj;
  return p;
}

Eigen::VectorXd sorted_eigs(const Eigen::MatrixXd& m) {
  return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(m, Eigen::EigenvaluesOnly).eigenvalues();
}

// H built entry by entry from the definition, independent of assemble().
Eigen::MatrixXd reference_matrix(const BoxSpec& box, const ModelParams& p, const Potential& v) {
  const auto sites = enumerate_sites(box);
  const auto m = static_cast<Eigen::Index>(sites.size());
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(m, m);
  for (Eigen::Index a = 0; a < m; ++a) {
    const auto& x = sites[static_cast<std::size_t>(a)];
    double w = 0.0;
    for (int j = 0; j < x.n(); ++j) w += v.at(x.particle(j));
    h(a, a) = interaction_energy(x, p.interaction) + p.g * w;
    for (Eigen::Index b = 0; b < m; ++b) {
      const auto& y = sites[static_cast<std::size_t>(b)];
      int dist = 0;
      for (std::size_t k = 0; k < x.coords().size(); ++k) {
        const int dk = std::abs(x.coords()[k] - y.coords()[k]);
        dist = p.adjacency == Adjacency::sup ? std::max(dist, dk) : dist + dk;
      }
      if (dist == 1) h(a, b) = 1.0;
    }
  }
  return h;
}

}  // namespace

TEST_CASE("sampling is a pure function of seed, realization and site") {
  const auto m = DisorderModel::uniform(42);
  const std::vector<int> p{3, -7};
  CHECK(sample_site(m, p, 9) == sample_site(m, p, 9));
  CHECK(sample_site(m, p, 9) != sample_site(m, p, 10));
  CHECK(sample_site(m, p, 9) != sample_site(DisorderModel::uniform(43), p, 9));

  // Batched sampling agrees with per-site draws, and enlarging the region
  // keeps the values on common sites.
  const auto small = sample_for_box(m, BoxSpec(c1({0, 4}), 2), 3);
  const auto large = sample_for_box(m, BoxSpec(c1({1, 3}), 6), 3);
  for (const auto& [site, value] : small.values()) {
    CHECK(value == sample_site(m, site, 3));
    CHECK(large.at(site) == value);
  }
  CHECK_THROWS_AS(sample_site(m, std::vector<int>{0, 0, 0, 0}, 0), DimensionError);
  CHECK_THROWS(sample_site(m, p, std::uint64_t{1} << 32));
}

TEST_CASE("disorder marginals") {
  std::vector<Point> region;
  for (int i = 0; i < 100000; ++i) region.push_back({i % 1000, i / 1000});
  const auto u = sample_potential(DisorderModel::uniform(1), region, 0);
  double mean = 0.0, lo = 1.0, hi = 0.0;
  for (const auto& [s, v] : u.values()) {
    mean += v;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  mean /= static_cast<double>(u.size());
  CHECK(std::fabs(mean - 0.5) < 0.01);
  CHECK(lo >= 0.0);
  CHECK(hi < 1.0);

  const auto g = sample_potential(DisorderModel::gaussian(2.0, 3.0, 1), region, 0);
  double s1 = 0.0, s2 = 0.0;
  for (const auto& [s, v] : g.values()) {
    s1 += v;
    s2 += v * v;
  }
  const double n = static_cast<double>(g.size());
  CHECK(std::fabs(s1 / n - 2.0) < 0.05);
  CHECK(std::fabs(std::sqrt(s2 / n - (s1 / n) * (s1 / n)) - 3.0) < 0.05);

  const auto tm = DisorderModel::table({-1.0, 4.0}, {0.25, 0.75}, 0.5, 1);
  CHECK(tm.validate().empty());
  const auto t = sample_potential(tm, region, 0);
  std::size_t high = 0, stray = 0;
  for (const auto& [s, v] : t.values()) {
    const bool near_high = std::fabs(v - 4.0) <= 0.25;
    stray += !(near_high || std::fabs(v + 1.0) <= 0.25);
    high += near_high;
  }
  CHECK(stray == 0);
  CHECK(std::fabs(static_cast<double>(high) / n - 0.75) < 0.01);
  CHECK(DisorderModel::table({0.0, 1.0}, {0.5, 0.5}, 0.0, 1).validate().size() == 1);
  CHECK_THROWS(DisorderModel::table({0.0}, {0.5, 0.5}, 0.1, 1).validate());
  CHECK_THROWS(DisorderModel::gaussian(0.0, -1.0, 1).validate());
}

TEST_CASE("interaction energy") {
  const auto phi = InteractionSpec::constant(1, 2.5);
  CHECK(interaction_energy(c1({4}), phi) == 0.0);
  CHECK(interaction_energy(c1({0, 1}), phi) == 2.5);
  CHECK(interaction_energy(c1({0, 1, 2}), phi) == 5.0);
  const auto radial = InteractionSpec::table({3.0, 1.0, 0.5});
  CHECK(radial.r0 == 2);
  CHECK(interaction_energy(c1({0, 2, 9}), radial) == 0.5);
  CHECK(radial.sup_abs() == 3.0);
  // Symmetric and zero beyond the range.
  const std::vector<int> a{0, 0}, b{1, -2}, far{5, 0};
  CHECK(radial.phi(a, b) == radial.phi(b, a));
  CHECK(radial.phi(a, far) == 0.0);
}

TEST_CASE("free chain of three sites") {
  auto p = model(1, 1, 0.0);
  p.interaction = InteractionSpec::none();
  const BoxSpec box(c1({0}), 2);
  const auto op = assemble(box, p, sample_for_box(p.disorder, box, 0));
  Eigen::MatrixXd expect(3, 3);
  expect << 0, 1, 0, 1, 0, 1, 0, 1, 0;
  CHECK(op.to_dense() == expect);
  const auto ev = sorted_eigs(op.to_dense());
  CHECK(ev[0] == doctest::Approx(-std::sqrt(2.0)));
  CHECK(std::fabs(ev[1]) < 1e-14);
  CHECK(ev[2] == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("assembled matrix matches the entrywise definition") {
  std::mt19937 rng(8);
  for (Adjacency adj : {Adjacency::sup, Adjacency::l1}) {
    for (int t = 0; t < 12; ++t) {
      const int n = 1 + t % 3;
      const int d = 1 + (t / 3) % 2;
      if (n * d > 4) continue;
      const int side = 1 + t % 3;
      std::uniform_int_distribution<int> u(-3, 3);
      std::vector<int> c(static_cast<std::size_t>(n * d));
      for (auto& v : c) v = u(rng);
      const BoxSpec box(Config(n, d, c), side);
      const auto p = model(n, d, 1.7, adj, static_cast<std::uint64_t>(t));
      const auto v = sample_for_box(p.disorder, box, static_cast<std::uint64_t>(t));
      const auto op = assemble(box, p, v);
      const Eigen::MatrixXd h = op.to_dense();
      CHECK(h == reference_matrix(box, p, v));
      CHECK(h == h.transpose());
    }
  }
}

TEST_CASE("neighbour counts and disorder only on the diagonal") {
  const BoxSpec box(c1({0, 0}), 2);
  auto p = model(2, 1, 0.0);
  p.interaction = InteractionSpec::none();
  const auto v = sample_for_box(p.disorder, box, 0);
  const auto free = assemble(box, p, v);
  const auto centre = static_cast<Eigen::Index>(free.sites().index_of(box.center));
  const Eigen::MatrixXd h0 = free.to_dense();
  CHECK(h0.row(centre).sum() == 8.0);
  CHECK(free.max_degree() == 8);
  CHECK(h0.diagonal().isZero());

  p.g = 3.0;
  const Eigen::MatrixXd h1 = assemble(box, p, v).to_dense();
  Eigen::MatrixXd off = h1 - h0;
  for (Eigen::Index i = 0; i < off.rows(); ++i) off(i, i) = 0.0;
  CHECK(off.isZero());

  p.adjacency = Adjacency::l1;
  CHECK(assemble(box, p, v).max_degree() == 4);
}

TEST_CASE("Gershgorin enclosure of the spectrum") {
  for (int seed = 0; seed < 5; ++seed) {
    const BoxSpec box(c1({0, 2}), 4);
    const auto p = model(2, 1, 4.0, Adjacency::sup, static_cast<std::uint64_t>(seed));
    const auto op = assemble(box, p, sample_for_box(p.disorder, box, 0));
    const Eigen::MatrixXd h = op.to_dense();
    const auto ev = sorted_eigs(h);
    CHECK(ev[0] >= h.diagonal().minCoeff() - op.max_degree() - 1e-12);
    CHECK(ev[ev.size() - 1] <= h.diagonal().maxCoeff() + op.max_degree() + 1e-12);
  }
}

TEST_CASE("dense and sparse storage agree") {
  const BoxSpec box(c1({0, 1}), 4);
  auto p = model(2, 1, 2.0);
  const auto v = sample_for_box(p.disorder, box, 0);
  const auto dense = assemble(box, p, v);
  p.dense_threshold = 1;
  const auto sparse = assemble(box, p, v);
  CHECK(dense.is_dense());
  CHECK_FALSE(sparse.is_dense());
  CHECK(dense.to_dense() == sparse.to_dense());
  CHECK(dense.entries().size() == sparse.entries().size());
  for (std::size_t i = 0; i < dense.size(); ++i) CHECK(dense.diagonal(i) == sparse.diagonal(i));
}

TEST_CASE("assembly preconditions") {
  const BoxSpec box(c1({0, 1}), 2);
  const auto p = model(2, 1, 1.0);
  CHECK_THROWS_AS(assemble(box, p, Potential{}), IncompletePotentialError);
  CHECK_THROWS_AS(assemble(BoxSpec(c1({0}), 2), p, Potential{}), DimensionError);
}

TEST_CASE("permuted boxes") {
  const BoxSpec box(c1({0, 3}), 3);
  const auto p = model(2, 1, 2.0);
  const auto v = sample_for_box(p.disorder, box, 4);
  const auto h = assemble(box, p, v).to_dense();
  const std::vector<int> id{0, 1}, swap{1, 0};
  CHECK(assemble_permuted(box, id, p, v).to_dense() == h);
  const auto hs = assemble_permuted(box, swap, p, v).to_dense();
  CHECK((sorted_eigs(h) - sorted_eigs(hs)).cwiseAbs().maxCoeff() < 1e-10);
  CHECK(assemble_permuted(apply_permutation(box, swap), swap, p, v).to_dense() == h);
}

TEST_CASE("identical inputs give bit-identical matrices") {
  const BoxSpec box(c1({0, 2, 5}), 2);
  const auto p = model(3, 1, 1.3);
  const auto a = assemble(box, p, sample_for_box(p.disorder, box, 7)).to_dense();
  const auto b = assemble(box, p, sample_for_box(p.disorder, box, 7)).to_dense();
  CHECK(a == b);
}

TEST_CASE("coordinate export") {
  auto p = model(1, 1, 0.0);
  p.interaction = InteractionSpec::none();
  const BoxSpec box(c1({0}), 2);
  std::ostringstream os;
  write_coordinate(os, assemble(box, p, sample_for_box(p.disorder, box, 0)), "note");
  CHECK(os.str() == "%%MatrixMarket matrix coordinate real general\n%note\n3 3 4\n1 2 1\n2 1 1\n2 3 1\n3 2 1\n");

  p.g = 1.0;
  std::ostringstream full;
  const auto op = assemble(box, p, sample_for_box(p.disorder, box, 0));
  write_coordinate(full, op);
  std::istringstream in(full.str());
  std::string banner;
  std::getline(in, banner);
  int rows = 0, cols = 0, nnz = 0;
  in >> rows >> cols >> nnz;
  Eigen::MatrixXd back = Eigen::MatrixXd::Zero(rows, cols);
  for (int k = 0; k < nnz; ++k) {
    int r = 0, c = 0;
    double val = 0.0;
    in >> r >> c >> val;
    back(r - 1, c - 1) = val;
  }
  CHECK(back == op.to_dense());  // 17 digits round-trip exactly
}
