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

#include "mpal/msa.hpp"

#include <bit>
#include <climits>
#include <cmath>

#include "mpal/errors.hpp"
#include "mpal/kernels.hpp"
#include "mpal/parallel.hpp"

namespace mpal {

void MSAParams::validate() const {
  if (L0 < 2) throw Error("L0 must be at least 2");
  if (!(alpha > 1.0 && alpha < 2.0)) throw Error("alpha must lie in (1, 2)");
  if (!(beta > 0.0 && beta < 1.0)) throw Error("beta must lie in (0, 1)");
  if (!(gamma >= 0.0)) throw Error("gamma must be non-negative");
  if (!(m0 > 0.0)) throw Error("m0 must be positive");
  if (J < 1 || J % 2 == 0) throw Error("J must be an odd positive integer");
  if (ell < 1) throw Error("ell must be positive");
  if (!(interval_lo <= interval_hi)) throw Error("interval must satisfy lo <= hi");
}

ScaleSequence scale_sequence(const MSAParams& params, int K) {
  params.validate();
  if (K < 0) throw Error("K must be non-negative");
  ScaleSequence s;
  s.lengths.push_back(params.L0);
  s.masses.push_back(params.m0);
  for (int k = 1; k <= K; ++k) {
    const double raw = std::round(std::pow(static_cast<double>(params.L0), std::pow(params.alpha, k)));
    if (!(raw < static_cast<double>(INT_MAX))) throw Error("scale L_" + std::to_string(k) + " overflows int");
    s.lengths.push_back(std::max(static_cast<int>(raw), s.lengths.back() + 1));
  }
  for (int k = 1; k <= K; ++k) {
    const double lk = s.lengths[static_cast<std::size_t>(k)];
    const double factor = 1.0 - params.gamma / std::sqrt(lk);
    if (factor <= 0.0) {
      throw NonpositiveMassError("mass factor 1 - gamma L_" + std::to_string(k) + "^{-1/2} is not positive");
    }
    s.masses.push_back(params.literal_mass_product ? params.m0 * std::pow(factor, k) : s.masses.back() * factor);
  }
  s.mass_floor_ok = s.masses.back() >= 0.5 * params.m0;
  return s;
}

bool exists_E_both_resonant(std::span<const double> a, std::span<const double> b, int side, double beta) {
  if (a.empty() || b.empty()) return false;
  return kernels::min_pair_gap(a, b) < 2.0 * resonance_radius(side, beta);
}

namespace {

void require_trials(const MCOptions& mc) {
  if (mc.trials < 1) throw ConfigError("trials must be at least 1", 0);
}

std::uint64_t count_hits(const std::vector<std::uint8_t>& hits, const MCOptions& mc) {
  if (mc.outcomes) *mc.outcomes = hits;
  std::uint64_t n = 0;
  for (auto h : hits) n += h;
  return n;
}

std::span<const double> as_span(const Eigen::VectorXd& v) { return {v.data(), static_cast<std::size_t>(v.size())}; }

}  // namespace

MCEstimate estimate_WS1(const BoxSpec& box, const ModelParams& params, double e, double beta, const MCOptions& mc) {
  require_trials(mc);
  params.validate();
  const auto hits = map_realizations(mc.trials, mc.threads, [&](std::uint64_t i) -> std::uint8_t {
    const Potential v = sample_for_box(params.disorder, box, mc.offset + i);
    const Eigen::VectorXd ev = eigenvalues_only(assemble(box, params, v));
    return is_ER(as_span(ev), e, box.side, beta) ? 1 : 0;
  });
  return make_estimate("WS1", count_hits(hits, mc), mc.trials);
}

MCEstimate estimate_WS2(const BoxSpec& a, const BoxSpec& b, const ModelParams& params, double beta,
                        const MCOptions& mc) {
  require_trials(mc);
  params.validate();
  if (a.side != b.side) throw Error("WS2 needs boxes of equal side");
  const std::vector<BoxSpec> pair{a, b};
  const auto hits = map_realizations(mc.trials, mc.threads, [&](std::uint64_t i) -> std::uint8_t {
    const Potential v = sample_for_boxes(params.disorder, pair, mc.offset + i);
    const Eigen::VectorXd ea = eigenvalues_only(assemble(a, params, v));
    const Eigen::VectorXd eb = eigenvalues_only(assemble(b, params, v));
    return exists_E_both_resonant(as_span(ea), as_span(eb), a.side, beta) ? 1 : 0;
  });
  auto est = make_estimate("WS2", count_hits(hits, mc), mc.trials);
  est.pair_kind = pair_kind(a, b, params.interaction.r0);
  if (!is_separable_pair(a, b)) est.warnings.push_back("boxes are not separable; their potentials are correlated");
  return est;
}

MCEstimate estimate_S0(const BoxSpec& box, const ModelParams& params, const EnergyGrid& grid, double m0,
                       const MCOptions& mc) {
  require_trials(mc);
  params.validate();
  const auto energies = grid.energies();
  const auto hits = map_realizations(mc.trials, mc.threads, [&](std::uint64_t i) -> std::uint8_t {
    if (energies.empty()) return 0;
    const SingularityScanner scan(box, params, sample_for_box(params.disorder, box, mc.offset + i));
    for (double e : energies) {
      if (scan.singular(e, m0)) return 1;
    }
    return 0;
  });
  auto est = make_estimate("S0", count_hits(hits, mc), mc.trials, grid.describe());
  est.fitted_exponent = fitted_exponent(est.p_hat, box.side, 2.0);
  return est;
}

MCEstimate estimate_DS(const BoxSpec& a, const BoxSpec& b, const ModelParams& params, const EnergyGrid& grid,
                       double m, const MCOptions& mc) {
  require_trials(mc);
  params.validate();
  if (!is_separable_pair(a, b)) throw Error("DS needs a separable pair of boxes");
  const auto energies = grid.energies();
  const std::vector<BoxSpec> pair{a, b};
  const auto hits = map_realizations(mc.trials, mc.threads, [&](std::uint64_t i) -> std::uint8_t {
    if (energies.empty()) return 0;
    const Potential v = sample_for_boxes(params.disorder, pair, mc.offset + i);
    const SingularityScanner sa(a, params, v);
    const SingularityScanner sb(b, params, v);
    for (double e : energies) {
      if (sa.singular(e, m) && sb.singular(e, m)) return 1;
    }
    return 0;
  });
  auto est = make_estimate("DS", count_hits(hits, mc), mc.trials, grid.describe());
  est.pair_kind = pair_kind(a, b, params.interaction.r0);
  return est;
}

std::string to_string(BoxKind k) {
  switch (k) {
    case BoxKind::fi: return "FI";
    case BoxKind::pi: return "PI";
    case BoxKind::any: return "any";
  }
  return "?";
}

BoxKind box_kind_from_string(const std::string& s) {
  if (s == "FI" || s == "fi") return BoxKind::fi;
  if (s == "PI" || s == "pi") return BoxKind::pi;
  if (s == "any") return BoxKind::any;
  throw Error("unknown box kind '" + s + "' (FI, PI or any)");
}

std::string pair_kind(const BoxSpec& a, const BoxSpec& b, int r0) {
  const bool fa = is_fully_interactive(a, r0);
  const bool fb = is_fully_interactive(b, r0);
  if (fa && fb) return "FI/FI";
  if (!fa && !fb) return "PI/PI";
  return "FI/PI";
}

namespace {

struct CliqueSearch {
  std::span<const std::uint64_t> adj;
  std::size_t target = 0;
  std::size_t best = 0;
  std::uint64_t best_set = 0;
  bool done = false;

  void expand(std::uint64_t current, std::size_t size, std::uint64_t cand) {
    if (cand == 0) {
      if (size > best) {
        best = size;
        best_set = current;
        done = target != 0 && best >= target;
      }
      return;
    }
    while (cand != 0 && !done) {
      if (size + static_cast<std::size_t>(std::popcount(cand)) <= best) return;
      const int v = std::countr_zero(cand);
      cand &= cand - 1;
      expand(current | (std::uint64_t{1} << v), size + 1, cand & adj[static_cast<std::size_t>(v)]);
    }
  }
};

// Candidate sub-boxes of one realisation with their scanners, reused across
// the energy grid.
class CountWorkspace {
 public:
  CountWorkspace(const BoxSpec& container, const ModelParams& params, const Potential& potential,
                 const CountOptions& options)
      : options_(options) {
    if (options.sub_side < 1 || options.sub_side >= container.side) {
      throw Error("count: sub-box side must be positive and smaller than the container side");
    }
    if (options.candidate_cap < 1 || options.candidate_cap > 64) throw Error("count: candidate cap must lie in [1, 64]");
    for (const auto& c : sub_box_centres(container, options.sub_side, options.effective_stride())) {
      BoxSpec sub(c, options.sub_side);
      if (options.kind != BoxKind::any &&
          is_fully_interactive(sub, params.interaction.r0) != (options.kind == BoxKind::fi)) {
        continue;
      }
      scanners_.emplace_back(sub, params, potential);
    }
  }

  std::size_t candidates() const { return scanners_.size(); }

  CountResult count(double e, double m, std::size_t target = 0) const {
    CountResult r;
    r.candidates = scanners_.size();
    std::vector<std::size_t> bad;
    for (std::size_t i = 0; i < scanners_.size(); ++i) {
      if (scanners_[i].singular(e, m)) bad.push_back(i);
    }
    r.singular_candidates = bad.size();
    if (bad.empty() || bad.size() < target) return r;
    if (bad.size() > options_.candidate_cap) {
      throw CandidateExplosionError(std::to_string(bad.size()) + " singular candidates exceed the cap of " +
                                    std::to_string(options_.candidate_cap) + "; use a larger stride");
    }
    std::vector<std::uint64_t> adj(bad.size(), 0);
    for (std::size_t a = 0; a < bad.size(); ++a) {
      for (std::size_t b = a + 1; b < bad.size(); ++b) {
        if (is_separable_pair(scanners_[bad[a]].box(), scanners_[bad[b]].box())) {
          adj[a] |= std::uint64_t{1} << b;
          adj[b] |= std::uint64_t{1} << a;
        }
      }
    }
    std::uint64_t set = 0;
    r.count = max_clique(adj, target, &set);
    for (std::size_t a = 0; a < bad.size(); ++a) {
      if ((set >> a) & 1U) r.witness.push_back(scanners_[bad[a]].box());
    }
    return r;
  }

 private:
  CountOptions options_;
  std::vector<SingularityScanner> scanners_;
};

}  // namespace

std::size_t max_clique(std::span<const std::uint64_t> adjacency, std::size_t target, std::uint64_t* best_set) {
  if (adjacency.size() > 64) throw Error("max_clique handles at most 64 vertices");
  CliqueSearch s;
  s.adj = adjacency;
  s.target = target;
  const std::uint64_t all = adjacency.size() == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << adjacency.size()) - 1;
  s.expand(0, 0, all);
  if (best_set) *best_set = s.best_set;
  return s.best;
}

CountResult count_separable_singular(const BoxSpec& container, const ModelParams& params, const Potential& potential,
                                     double e, double m, const CountOptions& options) {
  return CountWorkspace(container, params, potential, options).count(e, m);
}

MCEstimate estimate_count_tail(const BoxSpec& container, const ModelParams& params, const EnergyGrid& grid, double m,
                               std::size_t threshold, const CountOptions& options, const MCOptions& mc) {
  require_trials(mc);
  params.validate();
  if (threshold < 1) throw ConfigError("count threshold must be at least 1", 0);
  const auto energies = grid.energies();
  const auto hits = map_realizations(mc.trials, mc.threads, [&](std::uint64_t i) -> std::uint8_t {
    if (energies.empty()) return 0;
    const CountWorkspace ws(container, params, sample_for_box(params.disorder, container, mc.offset + i), options);
    if (ws.candidates() < threshold) return 0;
    for (double e : energies) {
      if (ws.count(e, m, threshold).count >= threshold) return 1;
    }
    return 0;
  });
  auto est = make_estimate("count>=" + std::to_string(threshold), count_hits(hits, mc), mc.trials, grid.describe());
  est.pair_kind = to_string(options.kind);
  return est;
}

double jns_next_mass(double m_k, int L_k, int J) {
  return m_k * (1.0 - (5.0 * J + 6.0) / std::sqrt(static_cast<double>(L_k)));
}

JNSReport j_ns_criterion_check(const BoxSpec& container, const ModelParams& params, const Potential& potential,
                               double e, int J, double m_k, std::optional<double> m_next,
                               const CountOptions& options, double alpha, double beta, int cnr_stride) {
  if (J < 1 || J % 2 == 0) throw Error("J must be an odd positive integer");
  JNSReport r;
  const double factor = 1.0 - (5.0 * J + 6.0) / std::sqrt(static_cast<double>(options.sub_side));
  r.degenerate = factor <= 0.0;
  r.m_next = m_next.value_or(m_k * factor);
  r.cnr = is_ECNR(container, params, potential, e, beta, alpha, cnr_stride).cnr;
  r.k_count = count_separable_singular(container, params, potential, e, m_k, options).count;
  r.hypotheses_met = r.cnr && r.k_count <= static_cast<std::size_t>(J);
  r.threshold = std::exp(-r.m_next * container.side);
  if (!r.hypotheses_met) return r;
  const auto op = assemble(container, params, potential);
  const auto spec = diagonalize(op, false);
  const NSResult ns = is_ENS(op, spec, e, r.m_next);
  r.gf_max = ns.gf_max;
  r.conclusion_holds = ns.non_singular;
  return r;
}

}  // namespace mpal
