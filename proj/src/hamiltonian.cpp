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

#include "mpal/hamiltonian.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numbers>
#include <ostream>
#include <set>

#include "mpal/errors.hpp"
#include "mpal/kernels.hpp"

namespace mpal {

DisorderModel DisorderModel::uniform(std::uint64_t seed) {
  DisorderModel m;
  m.master_seed = seed;
  return m;
}

DisorderModel DisorderModel::gaussian(double mean, double sd, std::uint64_t seed) {
  DisorderModel m;
  m.kind = Kind::gaussian;
  m.mean = mean;
  m.sd = sd;
  m.master_seed = seed;
  return m;
}

DisorderModel DisorderModel::table(std::vector<double> values, std::vector<double> probabilities, double smear,
                                   std::uint64_t seed) {
  DisorderModel m;
  m.kind = Kind::table;
  m.values = std::move(values);
  m.probabilities = std::move(probabilities);
  m.smear = smear;
  m.master_seed = seed;
  return m;
}

std::vector<std::string> DisorderModel::validate() const {
  std::vector<std::string> warnings;
  switch (kind) {
    case Kind::uniform01:
      break;
    case Kind::gaussian:
      if (!(sd > 0.0) || !std::isfinite(mean)) throw Error("gaussian disorder needs finite mean and sd > 0");
      break;
    case Kind::table: {
      if (values.empty() || values.size() != probabilities.size()) {
        throw Error("table disorder needs equally long, nonempty value and probability lists");
      }
      double total = 0.0;
      for (double p : probabilities) {
        if (!(p >= 0.0)) throw Error("table disorder probabilities must be nonnegative");
        total += p;
      }
      if (!(total > 0.0)) throw Error("table disorder probabilities must not all vanish");
      if (smear < 0.0) throw Error("table disorder smear must be nonnegative");
      if (smear == 0.0) {
        warnings.emplace_back("table disorder without smear has atoms; the marginal CDF is not Hoelder continuous");
      }
      break;
    }
  }
  return warnings;
}

double DisorderModel::draw(const PhiloxCounter& w) const {
  switch (kind) {
    case Kind::uniform01:
      return unit_double(w[0], w[1]);
    case Kind::gaussian: {
      const double r = std::sqrt(-2.0 * std::log(unit_double_open0(w[0], w[1])));
      return mean + sd * r * std::cos(2.0 * std::numbers::pi * unit_double(w[2], w[3]));
    }
    case Kind::table: {
      double total = 0.0;
      for (double p : probabilities) total += p;
      const double u = unit_double(w[0], w[1]) * total;
      double acc = 0.0;
      std::size_t k = 0;
      for (; k + 1 < values.size(); ++k) {
        acc += probabilities[k];
        if (u < acc) break;
      }
      return values[k] + smear * (unit_double(w[2], w[3]) - 0.5);
    }
  }
  return 0.0;
}

std::string to_string(DisorderModel::Kind k) {
  switch (k) {
    case DisorderModel::Kind::uniform01: return "uniform01";
    case DisorderModel::Kind::gaussian: return "gaussian";
    case DisorderModel::Kind::table: return "table";
  }
  return "?";
}

DisorderModel::Kind disorder_kind_from_string(const std::string& s) {
  if (s == "uniform01") return DisorderModel::Kind::uniform01;
  if (s == "gaussian") return DisorderModel::Kind::gaussian;
  if (s == "table") return DisorderModel::Kind::table;
  throw Error("unknown disorder kind '" + s + "'");
}

std::size_t PointHash::operator()(const Point& p) const noexcept {
  std::uint64_t h = 1469598103934665603ull;
  for (int c : p) {
    h ^= static_cast<std::uint32_t>(c);
    h *= 1099511628211ull;
  }
  return static_cast<std::size_t>(h);
}

double Potential::at(std::span<const int> p) const {
  auto it = values_.find(Point(p.begin(), p.end()));
  if (it == values_.end()) {
    std::string s = "(";
    for (std::size_t i = 0; i < p.size(); ++i) s += (i ? "," : "") + std::to_string(p[i]);
    throw IncompletePotentialError("potential has no value at site " + s + ")");
  }
  return it->second;
}

namespace {

PhiloxKey key_of(const DisorderModel& model) {
  return {static_cast<std::uint32_t>(model.master_seed), static_cast<std::uint32_t>(model.master_seed >> 32)};
}

void check_counter_range(std::size_t dim, std::uint64_t realization) {
  if (dim > 3) throw DimensionError("counter-based sampling supports lattice dimension d <= 3");
  if (realization > 0xFFFFFFFFull) throw Error("realization index must fit in 32 bits");
}

}  // namespace

double sample_site(const DisorderModel& model, std::span<const int> p, std::uint64_t realization) {
  check_counter_range(p.size(), realization);
  PhiloxCounter ctr{0, 0, 0, static_cast<std::uint32_t>(realization)};
  for (std::size_t i = 0; i < p.size(); ++i) ctr[i] = static_cast<std::uint32_t>(p[i]);
  return model.draw(philox4x32_10(ctr, key_of(model)));
}

Potential sample_potential(const DisorderModel& model, std::span<const Point> region, std::uint64_t realization) {
  Potential out;
  if (region.empty()) return out;
  const std::size_t n = region.size();
  std::vector<std::uint32_t> ctr(4 * n, 0), words(4 * n);
  for (std::size_t s = 0; s < n; ++s) {
    check_counter_range(region[s].size(), realization);
    for (std::size_t i = 0; i < region[s].size(); ++i) ctr[i * n + s] = static_cast<std::uint32_t>(region[s][i]);
    ctr[3 * n + s] = static_cast<std::uint32_t>(realization);
  }
  kernels::PhiloxBatch batch{{ctr.data(), ctr.data() + n, ctr.data() + 2 * n, ctr.data() + 3 * n},
                             {words.data(), words.data() + n, words.data() + 2 * n, words.data() + 3 * n},
                             n};
  const PhiloxKey key = key_of(model);
  kernels::active().philox4x32_10(batch, key[0], key[1]);
  for (std::size_t s = 0; s < n; ++s) {
    out.set(region[s], model.draw({words[s], words[n + s], words[2 * n + s], words[3 * n + s]}));
  }
  return out;
}

Potential sample_for_boxes(const DisorderModel& model, std::span<const BoxSpec> boxes, std::uint64_t realization) {
  std::set<Point> region;
  for (const auto& b : boxes) {
    auto base = projections(b).base;
    region.insert(base.begin(), base.end());
  }
  const std::vector<Point> flat(region.begin(), region.end());
  return sample_potential(model, flat, realization);
}

Potential sample_for_box(const DisorderModel& model, const BoxSpec& box, std::uint64_t realization) {
  return sample_for_boxes(model, std::span<const BoxSpec>(&box, 1), realization);
}

InteractionSpec InteractionSpec::none() { return {}; }

InteractionSpec InteractionSpec::constant(int r0, double u0) {
  if (r0 < 0) throw Error("interaction range must be nonnegative");
  return {r0, std::vector<double>(static_cast<std::size_t>(r0) + 1, u0)};
}

InteractionSpec InteractionSpec::table(std::vector<double> radial) {
  if (radial.empty()) throw Error("radial interaction table must be nonempty");
  for (double v : radial) {
    if (!std::isfinite(v)) throw Error("radial interaction table must be finite");
  }
  const int r0 = static_cast<int>(radial.size()) - 1;
  return {r0, std::move(radial)};
}

double InteractionSpec::phi(std::span<const int> a, std::span<const int> b) const {
  const int r = sup_norm(a, b);
  return r <= r0 ? radial[static_cast<std::size_t>(r)] : 0.0;
}

double InteractionSpec::sup_abs() const {
  double m = 0.0;
  for (double v : radial) m = std::max(m, std::fabs(v));
  return m;
}

double interaction_energy(const Config& x, const InteractionSpec& spec) {
  double u = 0.0;
  for (int a = 0; a < x.n(); ++a) {
    for (int b = a + 1; b < x.n(); ++b) u += spec.phi(x.particle(a), x.particle(b));
  }
  return u;
}

ModelParams ModelParams::with_particles(int n) const {
  ModelParams p = *this;
  p.n_particles = n;
  return p;
}

void ModelParams::validate() const {
  if (dim < 1 || n_particles < 1) throw DimensionError("model needs d >= 1 and N >= 1");
  if (!std::isfinite(g)) throw Error("coupling g must be finite");
  if (interaction.r0 < 0 || interaction.radial.size() != static_cast<std::size_t>(interaction.r0) + 1) {
    throw Error("interaction table must hold r0 + 1 radial values");
  }
  (void)disorder.validate();
}

std::vector<std::vector<int>> neighbour_offsets(int k, Adjacency adjacency) {
  std::vector<std::vector<int>> out;
  if (adjacency == Adjacency::l1) {
    for (int i = 0; i < k; ++i) {
      for (int s : {-1, 1}) {
        std::vector<int> off(static_cast<std::size_t>(k), 0);
        off[static_cast<std::size_t>(i)] = s;
        out.push_back(std::move(off));
      }
    }
    return out;
  }
  std::vector<int> off(static_cast<std::size_t>(k), -1);
  for (;;) {
    if (std::any_of(off.begin(), off.end(), [](int v) { return v != 0; })) out.push_back(off);
    int i = k - 1;
    while (i >= 0 && ++off[static_cast<std::size_t>(i)] > 1) {
      off[static_cast<std::size_t>(i)] = -1;
      --i;
    }
    if (i < 0) break;
  }
  return out;
}

AssembledOperator::AssembledOperator(BoxSpec box, Adjacency adjacency, Dense m)
    : box_(box), index_(box), adjacency_(adjacency), matrix_(std::move(m)) {}

AssembledOperator::AssembledOperator(BoxSpec box, Adjacency adjacency, Sparse m)
    : box_(box), index_(box), adjacency_(adjacency), matrix_(std::move(m)) {}

AssembledOperator::Dense AssembledOperator::to_dense() const {
  if (is_dense()) return dense();
  return Dense(sparse());
}

double AssembledOperator::diagonal(std::size_t i) const {
  const auto k = static_cast<Eigen::Index>(i);
  return is_dense() ? dense()(k, k) : sparse().coeff(k, k);
}

int AssembledOperator::max_degree() const {
  int best = 0;
  std::vector<int> deg(size(), 0);
  for (const auto& t : entries()) {
    if (t.row() != t.col()) ++deg[static_cast<std::size_t>(t.row())];
  }
  for (int d : deg) best = std::max(best, d);
  return best;
}

std::vector<Eigen::Triplet<double>> AssembledOperator::entries() const {
  std::vector<Eigen::Triplet<double>> out;
  if (is_dense()) {
    const auto& m = dense();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      for (Eigen::Index c = 0; c < m.cols(); ++c) {
        if (m(r, c) != 0.0) out.emplace_back(static_cast<int>(r), static_cast<int>(c), m(r, c));
      }
    }
  } else {
    const auto& m = sparse();
    for (Eigen::Index r = 0; r < m.outerSize(); ++r) {
      for (Sparse::InnerIterator it(m, r); it; ++it) {
        if (it.value() != 0.0) out.emplace_back(static_cast<int>(r), static_cast<int>(it.col()), it.value());
      }
    }
  }
  return out;
}

AssembledOperator assemble(const BoxSpec& box, const ModelParams& params, const Potential& potential) {
  if (box.n() != params.n_particles || box.dim() != params.dim) {
    throw DimensionError("box shape (N=" + std::to_string(box.n()) + ", d=" + std::to_string(box.dim()) +
                         ") differs from the model (N=" + std::to_string(params.n_particles) +
                         ", d=" + std::to_string(params.dim) + ")");
  }
  const SiteIndex index(box);
  const std::size_t m = index.size();
  const int k = box.n() * box.dim();
  const auto offsets = neighbour_offsets(k, params.adjacency);

  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(m * (offsets.size() + 1));
  std::vector<int> site(static_cast<std::size_t>(k)), nb(static_cast<std::size_t>(k));
  for (std::size_t i = 0; i < m; ++i) {
    index.coords_at(i, site);
    const Config x(box.n(), box.dim(), site);
    double w = 0.0;
    for (int j = 0; j < box.n(); ++j) w += potential.at(x.particle(j));
    const double diag = interaction_energy(x, params.interaction) + params.g * w;
    triplets.emplace_back(static_cast<int>(i), static_cast<int>(i), diag);
    for (const auto& off : offsets) {
      for (int c = 0; c < k; ++c) nb[static_cast<std::size_t>(c)] = site[static_cast<std::size_t>(c)] + off[static_cast<std::size_t>(c)];
      const std::size_t j = index.index_of(nb);
      if (j < m) triplets.emplace_back(static_cast<int>(i), static_cast<int>(j), 1.0);
    }
  }

  const auto em = static_cast<Eigen::Index>(m);
  if (m < params.dense_threshold) {
    AssembledOperator::Dense d = AssembledOperator::Dense::Zero(em, em);
    for (const auto& t : triplets) d(t.row(), t.col()) = t.value();
    return AssembledOperator(box, params.adjacency, std::move(d));
  }
  AssembledOperator::Sparse s(em, em);
  s.setFromTriplets(triplets.begin(), triplets.end());
  s.makeCompressed();
  return AssembledOperator(box, params.adjacency, std::move(s));
}

AssembledOperator assemble_permuted(const BoxSpec& box, std::span<const int> sigma, const ModelParams& params,
                                    const Potential& potential) {
  return assemble(apply_permutation(box, sigma), params, potential);
}

void write_coordinate(std::ostream& os, const AssembledOperator& op, const std::string& comment) {
  const auto entries = op.entries();
  os << "%%MatrixMarket matrix coordinate real general\n";
  if (!comment.empty()) os << '%' << comment << '\n';
  os << op.size() << ' ' << op.size() << ' ' << entries.size() << '\n';
  const auto old = os.precision(17);
  for (const auto& t : entries) os << t.row() + 1 << ' ' << t.col() + 1 << ' ' << t.value() << '\n';
  os.precision(old);
}

}  // namespace mpal
