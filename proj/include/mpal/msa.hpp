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

// Scale schedule and Monte Carlo estimators for the probabilistic inputs of
// the multi-scale induction: single and double resonance probabilities,
// initial-scale singularity, pairs of singular boxes, and the counts of
// pairwise separable singular sub-boxes.
//
// Every estimator takes realisation indices from [offset, offset + trials) and
// reduces hit counts by index, so results do not depend on the thread count.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mpal/geometry.hpp"
#include "mpal/hamiltonian.hpp"
#include "mpal/spectral.hpp"
#include "mpal/stats.hpp"

namespace mpal {

struct MSAParams {
  int L0 = 4;
  double alpha = 1.5;
  double beta = 0.5;
  double gamma = 0.0;
  double m0 = 1.0;
  std::optional<double> p_report;
  std::optional<double> q_report;
  int J = 1;
  int ell = 1;
  double interval_lo = -1.0;
  double interval_hi = 1.0;
  /// Use L_k in every factor of the mass product instead of L_j.
  bool literal_mass_product = false;

  void validate() const;
};

struct ScaleSequence {
  std::vector<int> lengths;
  std::vector<double> masses;
  bool mass_floor_ok = true;  // m_K >= m0 / 2
};

ScaleSequence scale_sequence(const MSAParams& params, int K);

/// An energy exists at which both spectra lie within exp(-L^beta) of it.
bool exists_E_both_resonant(std::span<const double> a, std::span<const double> b, int side, double beta);

struct MCOptions {
  std::uint64_t trials = 1;
  int threads = 1;
  std::uint64_t offset = 0;  // first realisation index
  std::vector<std::uint8_t>* outcomes = nullptr;  // per-realisation hit flags, if wanted
};

MCEstimate estimate_WS1(const BoxSpec& box, const ModelParams& params, double e, double beta,
                        const MCOptions& mc);
MCEstimate estimate_WS2(const BoxSpec& a, const BoxSpec& b, const ModelParams& params, double beta,
                        const MCOptions& mc);
/// Also fills fitted_exponent = -log p_hat / (2 log L0).
MCEstimate estimate_S0(const BoxSpec& box, const ModelParams& params, const EnergyGrid& grid, double m0,
                       const MCOptions& mc);
/// Both boxes singular at a common grid energy. Throws unless the pair is separable.
MCEstimate estimate_DS(const BoxSpec& a, const BoxSpec& b, const ModelParams& params, const EnergyGrid& grid,
                       double m, const MCOptions& mc);

enum class BoxKind { fi, pi, any };
std::string to_string(BoxKind k);
BoxKind box_kind_from_string(const std::string& s);

std::string pair_kind(const BoxSpec& a, const BoxSpec& b, int r0);

struct CountOptions {
  int sub_side = 1;
  int stride = 0;  // 0: ceil(sub_side / 2)
  BoxKind kind = BoxKind::any;
  std::size_t candidate_cap = 64;  // singular candidates fed to the clique search; at most 64

  int effective_stride() const { return stride > 0 ? stride : (sub_side + 1) / 2; }
};

struct CountResult {
  std::size_t count = 0;
  std::size_t candidates = 0;           // sub-boxes matching the kind filter
  std::size_t singular_candidates = 0;
  std::vector<BoxSpec> witness;         // a maximum pairwise separable family
};

/// Largest number of pairwise separable (E, m)-singular sub-boxes.
CountResult count_separable_singular(const BoxSpec& container, const ModelParams& params, const Potential& potential,
                                     double e, double m, const CountOptions& options);

/// Maximum clique size of a graph on at most 64 vertices given by adjacency
/// bitmasks; stops early once `target` is reached (0: no early stop).
std::size_t max_clique(std::span<const std::uint64_t> adjacency, std::size_t target, std::uint64_t* best_set);

MCEstimate estimate_count_tail(const BoxSpec& container, const ModelParams& params, const EnergyGrid& grid, double m,
                               std::size_t threshold, const CountOptions& options, const MCOptions& mc);

/// m_k (1 - (5J + 6) / sqrt(L_k)).
double jns_next_mass(double m_k, int L_k, int J);

struct JNSReport {
  bool cnr = false;
  std::size_t k_count = 0;
  bool hypotheses_met = false;
  std::optional<bool> conclusion_holds;  // empty when the hypotheses fail
  double m_next = 0.0;
  bool degenerate = false;  // the mass factor is not positive
  double gf_max = 0.0;
  double threshold = 0.0;
};

JNSReport j_ns_criterion_check(const BoxSpec& container, const ModelParams& params, const Potential& potential,
                               double e, int J, double m_k, std::optional<double> m_next,
                               const CountOptions& options, double alpha, double beta, int cnr_stride = 1);

}  // namespace mpal
