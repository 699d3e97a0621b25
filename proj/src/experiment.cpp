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

#include "mpal/experiment.hpp"

#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include "json.hpp"

#include "mpal/decay.hpp"
#include "mpal/errors.hpp"
#include "mpal/format.hpp"
#include "mpal/msa.hpp"
#include "mpal/parallel.hpp"
#include "mpal/spectral.hpp"

namespace mpal {

using nlohmann::json;

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

json to_json(const Config& x) { return to_string(x); }

json to_json(const BoxSpec& b) { return {{"center", to_string(b.center)}, {"side", b.side}}; }

json to_json(const MCEstimate& e) {
  json j{{"event", e.event},       {"trials", e.trials},          {"hits", e.hits},
         {"p_hat", e.p_hat},       {"ci_lo", e.ci95.lo},          {"ci_hi", e.ci95.hi},
         {"grid_meta", e.grid_meta}};
  if (e.fitted_exponent) j["fitted_exponent"] = *e.fitted_exponent;
  if (!e.pair_kind.empty()) j["pair_kind"] = e.pair_kind;
  if (!e.warnings.empty()) j["warnings"] = e.warnings;
  return j;
}

json to_json(const ClassificationReport& r) {
  json j{{"box", to_json(r.box)},
         {"energy", r.energy},
         {"mass", r.mass},
         {"NS", r.ens},
         {"R", r.er},
         {"CNR", r.ecnr},
         {"FI", r.fi},
         {"gf_max", r.ns.gf_max},
         {"threshold", r.ns.threshold},
         {"resonant", r.ns.resonant},
         {"nearest_eigenvalue", r.nearest_eigenvalue},
         {"cnr_sub_side", r.cnr.sub_side},
         {"cnr_degenerate", r.cnr.degenerate},
         {"cnr_sub_boxes_checked", r.cnr.sub_boxes_checked}};
  if (r.ns.witness) j["witness"] = to_json(*r.ns.witness);
  if (r.cnr.offending) j["cnr_offending"] = to_json(*r.cnr.offending);
  j["T"] = r.mt ? json(*r.mt) : json(nullptr);
  if (r.tunneling) {
    j["grid_meta"] = r.tunneling->grid_meta;
    if (r.tunneling->energy) j["tunneling_energy"] = *r.tunneling->energy;
    if (r.tunneling->pair) j["tunneling_pair"] = {to_json(r.tunneling->pair->first), to_json(r.tunneling->pair->second)};
  }
  return j;
}

std::ofstream open_out(const ExperimentConfig& cfg, const std::string& name, RunResult& result) {
  const auto path = std::filesystem::path(cfg.out) / name;
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw ConfigError("cannot write '" + path.string() + "'", 0);
  result.files.push_back(path.string());
  return os;
}

class JsonLines {
 public:
  JsonLines(const ExperimentConfig& cfg, RunResult& result) : os_(open_out(cfg, cfg.kind + ".jsonl", result)) {
    write({{"type", "meta"},
           {"tool", "mpal"},
           {"version", kVersion},
           {"config_hash", config_hash_hex(cfg)},
           {"kind", cfg.kind},
           {"seed", cfg.seed}});
  }
  void write(const json& j) { os_ << j.dump() << '\n'; }

 private:
  std::ofstream os_;
};

MCOptions mc_options(const ExperimentConfig& cfg, std::vector<std::uint8_t>* outcomes) {
  MCOptions mc;
  mc.trials = cfg.trials;
  mc.threads = cfg.threads;
  mc.offset = cfg.realization;
  mc.outcomes = outcomes;
  return mc;
}

int sub_side_of(const ExperimentConfig& cfg) {
  return cfg.sub_side > 0 ? cfg.sub_side : cnr_sub_side(cfg.box->side, cfg.msa.alpha);
}

CountOptions count_options(const ExperimentConfig& cfg) {
  CountOptions o;
  o.sub_side = sub_side_of(cfg);
  o.stride = cfg.stride;
  o.kind = cfg.box_kind;
  o.candidate_cap = cfg.candidate_cap;
  return o;
}

void record_outcomes(JsonLines& out, const ExperimentConfig& cfg, const std::string& event,
                     const std::vector<std::uint8_t>& outcomes) {
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    out.write({{"type", "realization"}, {"realization", cfg.realization + i}, {"event", event}, {"hit", outcomes[i] != 0}});
  }
}

void finish_mc(JsonLines& out, RunResult& result, const ExperimentConfig& cfg, MCEstimate est, std::string mass,
               const std::vector<std::uint8_t>& outcomes) {
  record_outcomes(out, cfg, est.event, outcomes);
  out.write({{"type", "estimate"}, {"estimate", to_json(est)}});
  for (const auto& w : est.warnings) result.warnings.push_back(w);
  result.summary.push_back({std::move(est), cfg.box ? cfg.box->side : 0, std::move(mass)});
}

}  // namespace

void write_summary_csv(std::ostream& os, const ExperimentConfig& cfg, const std::vector<SummaryRow>& rows) {
  os << "# mpal " << kVersion << " config=" << config_hash_hex(cfg) << '\n';
  os << kSummaryColumns << '\n';
  for (const auto& r : rows) {
    const auto& e = r.estimate;
    os << csv_field(e.event) << ',' << r.side << ',' << cfg.model.n_particles << ',' << cfg.model.dim << ','
       << fmt17(cfg.model.g) << ',' << r.mass << ',' << e.trials << ',' << e.hits << ',' << fmt17(e.p_hat) << ','
       << fmt17(e.ci95.lo) << ',' << fmt17(e.ci95.hi) << ',' << csv_field(e.grid_meta) << ',' << cfg.seed << '\n';
  }
}

RunResult run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  RunResult result;
  std::filesystem::create_directories(cfg.out);
  {
    auto os = open_out(cfg, cfg.kind + ".resolved.cfg", result);
    os << "# mpal " << kVersion << " config=" << config_hash_hex(cfg) << '\n' << serialize(cfg);
  }

  ModelParams params = cfg.model;
  params.disorder.master_seed = cfg.seed;
  for (auto& w : params.disorder.validate()) result.warnings.push_back(std::move(w));
  const EnergyGrid grid = cfg.grid();
  const std::string& kind = cfg.kind;
  JsonLines out(cfg, result);
  std::vector<std::uint8_t> outcomes;

  if (kind == "assemble") {
    const BoxSpec& box = *cfg.box;
    const auto op = assemble(box, params, sample_for_box(params.disorder, box, cfg.realization));
    auto mtx = open_out(cfg, "assemble.mtx", result);
    write_coordinate(mtx, op,
                     std::string(" mpal ") + kVersion + " config=" + config_hash_hex(cfg) +
                         " realization=" + std::to_string(cfg.realization));
    out.write({{"type", "realization"},
               {"realization", cfg.realization},
               {"box", to_json(box)},
               {"sites", op.size()},
               {"nonzeros", op.entries().size()},
               {"storage", op.is_dense() ? "dense" : "sparse"},
               {"max_degree", op.max_degree()},
               {"adjacency", to_string(op.adjacency())}});
  } else if (kind == "spectrum") {
    const BoxSpec& box = *cfg.box;
    const auto spectra = map_realizations(cfg.trials, cfg.threads, [&](std::uint64_t i) {
      const auto ev = eigenvalues_only(assemble(box, params, sample_for_box(params.disorder, box, cfg.realization + i)));
      return std::vector<double>(ev.data(), ev.data() + ev.size());
    });
    for (std::size_t i = 0; i < spectra.size(); ++i) {
      out.write({{"type", "realization"}, {"realization", cfg.realization + i}, {"eigenvalues", spectra[i]}});
    }
  } else if (kind == "green") {
    const BoxSpec& box = *cfg.box;
    const auto op = assemble(box, params, sample_for_box(params.disorder, box, cfg.realization));
    const Config x = cfg.source.empty() ? box.center : Config(box.n(), box.dim(), cfg.source);
    const Config y = cfg.target.empty() ? boundary(box).front() : Config(box.n(), box.dim(), cfg.target);
    const auto spec = diagonalize(op);
    const double direct = green(op, cfg.energy, x, y, spec.values());
    out.write({{"type", "realization"},
               {"realization", cfg.realization},
               {"energy", cfg.energy},
               {"x", to_json(x)},
               {"y", to_json(y)},
               {"green", direct},
               {"green_spectral", green_from_spectrum(spec, cfg.energy, x, y)}});
  } else if (kind == "classify") {
    const BoxSpec& box = *cfg.box;
    ClassificationOptions opts;
    opts.beta = cfg.msa.beta;
    opts.alpha = cfg.msa.alpha;
    opts.cnr_stride = cfg.cnr_stride;
    if (cfg.sub_side > 0) opts.tunneling_side = cfg.sub_side;
    opts.grid = grid;
    opts.tunneling_stride = cfg.stride > 0 ? cfg.stride : 1;
    const auto reports = map_realizations(cfg.trials, cfg.threads, [&](std::uint64_t i) {
      return classify(box, params, sample_for_box(params.disorder, box, cfg.realization + i), cfg.energy, cfg.mass,
                      opts);
    });
    for (std::size_t i = 0; i < reports.size(); ++i) {
      auto j = to_json(reports[i]);
      j["type"] = "realization";
      j["realization"] = cfg.realization + i;
      out.write(j);
    }
  } else if (kind == "geometry-check") {
    const BoxSpec& box = *cfg.box;
    const auto cov = check_covering(box.center, box.side, cfg.covering_range);
    json examples = json::array();
    for (const auto& y : cov.examples) examples.push_back(to_json(y));
    out.write({{"type", "covering"},
               {"x", to_json(box.center)},
               {"side", box.side},
               {"range", cfg.covering_range},
               {"boxes", cov.boxes},
               {"checked", cov.checked},
               {"outside", cov.outside},
               {"violations", cov.violations},
               {"examples", examples}});
    if (cov.outside > 0) {
      result.summary.push_back({make_estimate("covering-violation", cov.violations, cov.outside), box.side, ""});
    }
    const auto fi = check_distant_fi_projections(box.n(), box.dim(), box.side, params.interaction.r0, cfg.samples,
                                                 cfg.seed);
    out.write({{"type", "distant-fi"},
               {"side", box.side},
               {"pairs", fi.pairs},
               {"rejected", fi.rejected},
               {"violations", fi.violations}});
    result.summary.push_back({make_estimate("distant-fi-overlap", fi.violations, fi.pairs), box.side, ""});
  } else if (kind == "scales") {
    const auto s = scale_sequence(cfg.msa, cfg.scales);
    for (std::size_t k = 0; k < s.lengths.size(); ++k) {
      out.write({{"type", "scale"}, {"k", k}, {"L", s.lengths[k]}, {"m", s.masses[k]}});
    }
    out.write({{"type", "mass-floor"}, {"ok", s.mass_floor_ok}, {"m_last", s.masses.back()}, {"m0", cfg.msa.m0}});
    if (!s.mass_floor_ok) result.warnings.push_back("m_K fell below m0 / 2");
  } else if (kind == "mc-wegner") {
    const auto mc = mc_options(cfg, &outcomes);
    auto est = cfg.box2 ? estimate_WS2(*cfg.box, *cfg.box2, params, cfg.msa.beta, mc)
                        : estimate_WS1(*cfg.box, params, cfg.energy, cfg.msa.beta, mc);
    finish_mc(out, result, cfg, std::move(est), "", outcomes);
  } else if (kind == "mc-s0") {
    auto est = estimate_S0(*cfg.box, params, grid, cfg.msa.m0, mc_options(cfg, &outcomes));
    finish_mc(out, result, cfg, std::move(est), fmt17(cfg.msa.m0), outcomes);
  } else if (kind == "mc-ds") {
    auto est = estimate_DS(*cfg.box, *cfg.box2, params, grid, cfg.mass, mc_options(cfg, &outcomes));
    finish_mc(out, result, cfg, std::move(est), fmt17(cfg.mass), outcomes);
  } else if (kind == "mc-count") {
    auto est = estimate_count_tail(*cfg.box, params, grid, cfg.mass, cfg.threshold, count_options(cfg),
                                   mc_options(cfg, &outcomes));
    finish_mc(out, result, cfg, std::move(est), fmt17(cfg.mass), outcomes);
  } else if (kind == "jns-check") {
    const BoxSpec& box = *cfg.box;
    const auto opts = count_options(cfg);
    const auto energies = grid.energies();
    struct Tally {
      std::uint64_t met = 0;
      std::uint64_t falsified = 0;
      bool degenerate = false;
      double m_next = 0.0;
    };
    const auto tallies = map_realizations(cfg.trials, cfg.threads, [&](std::uint64_t i) {
      const Potential v = sample_for_box(params.disorder, box, cfg.realization + i);
      Tally t;
      for (double e : energies) {
        const auto r = j_ns_criterion_check(box, params, v, e, cfg.msa.J, cfg.mass, std::nullopt, opts, cfg.msa.alpha,
                                            cfg.msa.beta, cfg.cnr_stride);
        t.degenerate = r.degenerate;
        t.m_next = r.m_next;
        if (!r.hypotheses_met) continue;
        ++t.met;
        if (!*r.conclusion_holds) ++t.falsified;
      }
      return t;
    });
    std::uint64_t met = 0, falsified = 0;
    for (std::size_t i = 0; i < tallies.size(); ++i) {
      met += tallies[i].met;
      falsified += tallies[i].falsified;
      out.write({{"type", "realization"},
                 {"realization", cfg.realization + i},
                 {"energies", energies.size()},
                 {"hypotheses_met", tallies[i].met},
                 {"falsified", tallies[i].falsified},
                 {"m_next", tallies[i].m_next},
                 {"degenerate", tallies[i].degenerate}});
    }
    if (!tallies.empty() && tallies.front().degenerate) result.warnings.push_back("mass factor of the J-NS step is not positive");
    const std::uint64_t total = cfg.trials * energies.size();
    const std::string mass = fmt17(cfg.mass);
    if (total > 0) {
      auto est = make_estimate("JNS-hypotheses", met, total, grid.describe());
      out.write({{"type", "estimate"}, {"estimate", to_json(est)}});
      result.summary.push_back({std::move(est), box.side, mass});
    }
    if (met > 0) {
      auto est = make_estimate("JNS-falsified", falsified, met, grid.describe());
      out.write({{"type", "estimate"}, {"estimate", to_json(est)}});
      result.summary.push_back({std::move(est), box.side, mass});
    }
  } else if (kind == "decay") {
    const BoxSpec& box = *cfg.box;
    const auto profiles = map_realizations(cfg.trials, cfg.threads, [&](std::uint64_t i) {
      const auto spec = diagonalize(assemble(box, params, sample_for_box(params.disorder, box, cfg.realization + i)));
      auto [lo, hi] = central_half_window(spec.values());
      if (cfg.window_lo) lo = *cfg.window_lo;
      if (cfg.window_hi) hi = *cfg.window_hi;
      return mass_profile(spec, lo, hi, cfg.shell_statistic);
    });
    auto csv = open_out(cfg, "decay.csv", result);
    csv << "# mpal " << kVersion << " config=" << config_hash_hex(cfg) << '\n';
    csv << "realization,";
    bool header = true;
    for (std::size_t i = 0; i < profiles.size(); ++i) {
      const auto& p = profiles[i];
      std::ostringstream rows;
      write_decay_csv(rows, p);
      std::istringstream lines(rows.str());
      std::string line;
      std::getline(lines, line);
      if (header) {
        csv << line << '\n';
        header = false;
      }
      while (std::getline(lines, line)) csv << cfg.realization + i << ',' << line << '\n';
      out.write({{"type", "realization"},
                 {"realization", cfg.realization + i},
                 {"states", p.fits.size()},
                 {"skipped", p.skipped},
                 {"median", p.median},
                 {"q1", p.q1},
                 {"q3", p.q3},
                 {"fraction_positive", p.fraction_positive},
                 {"reference", "localization-center"}});
    }
  }

  if (!result.summary.empty()) {
    auto os = open_out(cfg, kind + ".summary.csv", result);
    write_summary_csv(os, cfg, result.summary);
  }
  return result;
}

}  // namespace mpal
