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

#include "mpal/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <istream>
#include <map>
#include <sstream>

#include "mpal/errors.hpp"
#include "mpal/format.hpp"

namespace mpal {

const std::vector<std::string>& experiment_kinds() {
  static const std::vector<std::string> kinds{"assemble", "spectrum", "green",  "classify",  "geometry-check",
                                              "scales",   "mc-wegner", "mc-s0", "mc-ds",     "mc-count",
                                              "jns-check", "decay"};
  return kinds;
}

ExperimentConfig::ExperimentConfig() { model.interaction = InteractionSpec::constant(1, 1.0); }

EnergyGrid ExperimentConfig::grid() const {
  return {grid_lo.value_or(msa.interval_lo), grid_hi.value_or(msa.interval_hi), grid_points};
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> out;
  if (trim(v).empty()) return out;
  std::string item;
  std::istringstream is(v);
  while (std::getline(is, item, ',')) out.push_back(trim(item));
  return out;
}

template <class T>
T parse_integral(const std::string& v, int line, const char* what) {
  T out{};
  const auto s = trim(v);
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  if (ec != std::errc() || p != s.data() + s.size() || s.empty()) {
    throw ConfigError(std::string("expected ") + what + ", got '" + s + "'", line);
  }
  return out;
}

int to_int(const std::string& v, int line) { return parse_integral<int>(v, line, "an integer"); }
std::uint64_t to_u64(const std::string& v, int line) {
  return parse_integral<std::uint64_t>(v, line, "a non-negative integer");
}

double to_double(const std::string& v, int line) {
  const auto s = trim(v);
  char* end = nullptr;
  const double d = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size() || !std::isfinite(d)) {
    throw ConfigError("expected a finite number, got '" + s + "'", line);
  }
  return d;
}

std::optional<double> to_opt_double(const std::string& v, int line) {
  if (trim(v) == "none") return std::nullopt;
  return to_double(v, line);
}

bool to_bool(const std::string& v, int line) {
  const auto s = trim(v);
  if (s == "true") return true;
  if (s == "false") return false;
  throw ConfigError("expected true or false, got '" + s + "'", line);
}

std::vector<int> to_int_list(const std::string& v, int line) {
  std::vector<int> out;
  for (const auto& t : split_list(v)) out.push_back(to_int(t, line));
  return out;
}

std::vector<double> to_double_list(const std::string& v, int line) {
  std::vector<double> out;
  for (const auto& t : split_list(v)) out.push_back(to_double(t, line));
  return out;
}

template <class T>
std::string join(const std::vector<T>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ',';
    if constexpr (std::is_floating_point_v<T>) {
      out += fmt17(v[i]);
    } else {
      out += std::to_string(v[i]);
    }
  }
  return out;
}

std::string opt(const std::optional<double>& v) { return v ? fmt17(*v) : "none"; }

struct RawBox {
  std::vector<int> center;
  int side = 1;
  int line = 0;
  bool present = false;
};

using Handler = std::function<void(const std::string&, int)>;

// Line of the first occurrence of each "section.key"; 0 when absent.
using LineMap = std::map<std::string, int>;

int line_of(const LineMap& lines, const std::string& key) {
  const auto it = lines.find(key);
  return it == lines.end() ? 0 : it->second;
}

void check(bool ok, const std::string& what, int line) {
  if (!ok) throw ConfigError(what, line);
}

BoxSpec make_box(const RawBox& raw, const ModelParams& model, const char* name) {
  const auto expected = static_cast<std::size_t>(model.n_particles * model.dim);
  check(raw.center.size() == expected,
        std::string("[") + name + "] center needs " + std::to_string(expected) + " coordinates (particles * dim), got " +
            std::to_string(raw.center.size()),
        raw.line);
  check(raw.side >= 1, std::string("[") + name + "] side must be positive", raw.line);
  return {Config(model.n_particles, model.dim, raw.center), raw.side};
}

void validate_impl(const ExperimentConfig& c, const LineMap& lines) {
  const auto& kinds = experiment_kinds();
  check(std::find(kinds.begin(), kinds.end(), c.kind) != kinds.end(), "unknown experiment kind '" + c.kind + "'",
        line_of(lines, "experiment.kind"));
  try {
    c.model.validate();
  } catch (const Error& e) {
    throw ConfigError(std::string("[model] ") + e.what(), line_of(lines, "model"));
  }
  check(c.model.dim <= 3, "[model] dim must be at most 3", line_of(lines, "model.dim"));
  try {
    c.msa.validate();
  } catch (const Error& e) {
    throw ConfigError(std::string("[msa] ") + e.what(), line_of(lines, "msa"));
  }
  check(c.trials >= 1, "trials must be at least 1", line_of(lines, "experiment.trials"));
  check(c.realization + c.trials <= (std::uint64_t{1} << 32), "realization indices must stay below 2^32",
        line_of(lines, "experiment.realization"));
  check(c.grid_points >= 1, "grid_points must be at least 1", line_of(lines, "experiment.grid_points"));
  check(c.sub_side >= 0, "sub_side must be non-negative", line_of(lines, "experiment.sub_side"));
  check(c.stride >= 0, "stride must be non-negative", line_of(lines, "experiment.stride"));
  check(c.cnr_stride >= 1, "cnr_stride must be positive", line_of(lines, "experiment.cnr_stride"));
  check(c.threshold >= 1, "threshold must be at least 1", line_of(lines, "experiment.threshold"));
  check(c.candidate_cap >= 1 && c.candidate_cap <= 64, "candidate_cap must lie in [1, 64]",
        line_of(lines, "experiment.candidate_cap"));
  check(c.scales >= 0, "scales must be non-negative", line_of(lines, "experiment.scales"));
  check(c.covering_range >= 0, "covering_range must be non-negative", line_of(lines, "experiment.covering_range"));
  check(c.samples >= 1, "samples must be at least 1", line_of(lines, "experiment.samples"));
  check(c.threads >= 1, "threads must be at least 1", line_of(lines, "experiment.threads"));
  const auto nd = static_cast<std::size_t>(c.model.n_particles * c.model.dim);
  check(c.source.empty() || c.source.size() == nd, "source needs particles * dim coordinates",
        line_of(lines, "experiment.source"));
  check(c.target.empty() || c.target.size() == nd, "target needs particles * dim coordinates",
        line_of(lines, "experiment.target"));
  const bool needs_box = c.kind != "scales";
  check(!needs_box || c.box.has_value(), "experiment '" + c.kind + "' needs a [box] section",
        line_of(lines, "experiment.kind"));
  check(c.kind != "mc-ds" || c.box2.has_value(), "mc-ds needs a [box2] section", line_of(lines, "experiment.kind"));
  for (const auto* b : {&c.box, &c.box2}) {
    if (!b->has_value()) continue;
    check((*b)->n() == c.model.n_particles && (*b)->dim() == c.model.dim, "box shape does not match the model",
          line_of(lines, b == &c.box ? "box" : "box2"));
  }
  if (c.box && c.box2) {
    check(c.box->side == c.box2->side, "[box] and [box2] need the same side", line_of(lines, "box2.side"));
  }
  const bool needs_sub = c.kind == "mc-count" || c.kind == "jns-check";
  if (needs_sub && c.box) {
    const int sub = c.sub_side > 0 ? c.sub_side : cnr_sub_side(c.box->side, c.msa.alpha);
    check(sub < c.box->side, "sub_side must be smaller than the box side", line_of(lines, "experiment.sub_side"));
  }
}

}  // namespace

void ExperimentConfig::validate() const { validate_impl(*this, {}); }

ExperimentConfig parse_config(std::istream& in) {
  ExperimentConfig c;
  RawBox box, box2;
  std::optional<std::vector<double>> radial;
  std::optional<double> u0;
  int r0 = 1;
  LineMap lines;

  std::map<std::string, std::map<std::string, Handler>> table;
  auto& model = table["model"];
  model["dim"] = [&](const std::string& v, int l) { c.model.dim = to_int(v, l); };
  model["particles"] = [&](const std::string& v, int l) { c.model.n_particles = to_int(v, l); };
  model["g"] = [&](const std::string& v, int l) { c.model.g = to_double(v, l); };
  model["adjacency"] = [&](const std::string& v, int l) {
    try {
      c.model.adjacency = adjacency_from_string(trim(v));
    } catch (const Error& e) {
      throw ConfigError(e.what(), l);
    }
  };
  model["dense_threshold"] = [&](const std::string& v, int l) { c.model.dense_threshold = to_u64(v, l); };
  model["disorder"] = [&](const std::string& v, int l) {
    try {
      c.model.disorder.kind = disorder_kind_from_string(trim(v));
    } catch (const Error& e) {
      throw ConfigError(e.what(), l);
    }
  };
  model["disorder_mean"] = [&](const std::string& v, int l) { c.model.disorder.mean = to_double(v, l); };
  model["disorder_sd"] = [&](const std::string& v, int l) { c.model.disorder.sd = to_double(v, l); };
  model["disorder_values"] = [&](const std::string& v, int l) { c.model.disorder.values = to_double_list(v, l); };
  model["disorder_probabilities"] = [&](const std::string& v, int l) {
    c.model.disorder.probabilities = to_double_list(v, l);
  };
  model["disorder_smear"] = [&](const std::string& v, int l) { c.model.disorder.smear = to_double(v, l); };
  model["interaction_r0"] = [&](const std::string& v, int l) { r0 = to_int(v, l); };
  model["interaction_u0"] = [&](const std::string& v, int l) { u0 = to_double(v, l); };
  model["interaction_radial"] = [&](const std::string& v, int l) { radial = to_double_list(v, l); };

  for (auto* raw : {&box, &box2}) {
    auto& sec = table[raw == &box ? "box" : "box2"];
    sec["center"] = [raw](const std::string& v, int l) {
      raw->center = to_int_list(v, l);
      raw->line = l;
    };
    sec["side"] = [raw](const std::string& v, int l) { raw->side = to_int(v, l); };
  }

  auto& msa = table["msa"];
  msa["L0"] = [&](const std::string& v, int l) { c.msa.L0 = to_int(v, l); };
  msa["alpha"] = [&](const std::string& v, int l) { c.msa.alpha = to_double(v, l); };
  msa["beta"] = [&](const std::string& v, int l) { c.msa.beta = to_double(v, l); };
  msa["gamma"] = [&](const std::string& v, int l) { c.msa.gamma = to_double(v, l); };
  msa["m0"] = [&](const std::string& v, int l) { c.msa.m0 = to_double(v, l); };
  msa["p_report"] = [&](const std::string& v, int l) { c.msa.p_report = to_opt_double(v, l); };
  msa["q_report"] = [&](const std::string& v, int l) { c.msa.q_report = to_opt_double(v, l); };
  msa["J"] = [&](const std::string& v, int l) { c.msa.J = to_int(v, l); };
  msa["ell"] = [&](const std::string& v, int l) { c.msa.ell = to_int(v, l); };
  msa["interval"] = [&](const std::string& v, int l) {
    const auto iv = to_double_list(v, l);
    if (iv.size() != 2) throw ConfigError("interval needs two numbers: lo, hi", l);
    c.msa.interval_lo = iv[0];
    c.msa.interval_hi = iv[1];
  };
  msa["literal_mass_product"] = [&](const std::string& v, int l) { c.msa.literal_mass_product = to_bool(v, l); };

  auto& ex = table["experiment"];
  ex["kind"] = [&](const std::string& v, int) { c.kind = trim(v); };
  ex["seed"] = [&](const std::string& v, int l) { c.seed = to_u64(v, l); };
  ex["trials"] = [&](const std::string& v, int l) { c.trials = to_u64(v, l); };
  ex["realization"] = [&](const std::string& v, int l) { c.realization = to_u64(v, l); };
  ex["energy"] = [&](const std::string& v, int l) { c.energy = to_double(v, l); };
  ex["mass"] = [&](const std::string& v, int l) { c.mass = to_double(v, l); };
  ex["grid_lo"] = [&](const std::string& v, int l) { c.grid_lo = to_opt_double(v, l); };
  ex["grid_hi"] = [&](const std::string& v, int l) { c.grid_hi = to_opt_double(v, l); };
  ex["grid_points"] = [&](const std::string& v, int l) { c.grid_points = to_int(v, l); };
  ex["sub_side"] = [&](const std::string& v, int l) { c.sub_side = to_int(v, l); };
  ex["stride"] = [&](const std::string& v, int l) { c.stride = to_int(v, l); };
  ex["cnr_stride"] = [&](const std::string& v, int l) { c.cnr_stride = to_int(v, l); };
  ex["box_kind"] = [&](const std::string& v, int l) {
    try {
      c.box_kind = box_kind_from_string(trim(v));
    } catch (const Error& e) {
      throw ConfigError(e.what(), l);
    }
  };
  ex["threshold"] = [&](const std::string& v, int l) { c.threshold = to_u64(v, l); };
  ex["candidate_cap"] = [&](const std::string& v, int l) { c.candidate_cap = to_u64(v, l); };
  ex["scales"] = [&](const std::string& v, int l) { c.scales = to_int(v, l); };
  ex["source"] = [&](const std::string& v, int l) { c.source = to_int_list(v, l); };
  ex["target"] = [&](const std::string& v, int l) { c.target = to_int_list(v, l); };
  ex["window_lo"] = [&](const std::string& v, int l) { c.window_lo = to_opt_double(v, l); };
  ex["window_hi"] = [&](const std::string& v, int l) { c.window_hi = to_opt_double(v, l); };
  ex["shell_statistic"] = [&](const std::string& v, int l) {
    const auto s = trim(v);
    if (s == "max") {
      c.shell_statistic = ShellStatistic::max;
    } else if (s == "mean") {
      c.shell_statistic = ShellStatistic::mean;
    } else {
      throw ConfigError("shell_statistic must be max or mean", l);
    }
  };
  ex["covering_range"] = [&](const std::string& v, int l) { c.covering_range = to_int(v, l); };
  ex["samples"] = [&](const std::string& v, int l) { c.samples = to_u64(v, l); };
  ex["threads"] = [&](const std::string& v, int l) { c.threads = to_int(v, l); };
  ex["out"] = [&](const std::string& v, int) { c.out = trim(v); };

  std::string section;
  std::string text;
  int line = 0;
  while (std::getline(in, text)) {
    ++line;
    const auto hash = text.find('#');
    if (hash != std::string::npos) text.erase(hash);
    text = trim(text);
    if (text.empty()) continue;
    if (text.front() == '[') {
      if (text.back() != ']') throw ConfigError("malformed section header", line);
      section = trim(text.substr(1, text.size() - 2));
      if (!table.count(section)) throw ConfigError("unknown section [" + section + "]", line);
      if (lines.count(section)) throw ConfigError("duplicate section [" + section + "]", line);
      lines[section] = line;
      if (section == "box") box.present = true;
      if (section == "box2") box2.present = true;
      continue;
    }
    const auto eq = text.find('=');
    if (eq == std::string::npos) throw ConfigError("expected key = value", line);
    if (section.empty()) throw ConfigError("key outside of any section", line);
    const auto key = trim(text.substr(0, eq));
    const auto value = text.substr(eq + 1);
    const auto& handlers = table[section];
    const auto it = handlers.find(key);
    if (it == handlers.end()) throw ConfigError("unknown key '" + key + "' in [" + section + "]", line);
    const auto full = section + "." + key;
    if (lines.count(full)) throw ConfigError("duplicate key '" + key + "' in [" + section + "]", line);
    lines[full] = line;
    it->second(value, line);
  }

  if (radial && u0) {
    throw ConfigError("give either interaction_radial or interaction_u0, not both",
                      line_of(lines, "model.interaction_u0"));
  }
  try {
    if (radial) {
      c.model.interaction = InteractionSpec::table(*radial);
      if (lines.count("model.interaction_r0") && r0 != c.model.interaction.r0) {
        throw ConfigError("interaction_r0 disagrees with the length of interaction_radial",
                          line_of(lines, "model.interaction_r0"));
      }
    } else {
      c.model.interaction = InteractionSpec::constant(r0, u0.value_or(1.0));
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(e.what(), line_of(lines, "model.interaction_r0"));
  }
  c.model.disorder.master_seed = c.seed;
  if (box.present) c.box = make_box(box, c.model, "box");
  if (box2.present) c.box2 = make_box(box2, c.model, "box2");
  validate_impl(c, lines);
  return c;
}

ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'", 0);
  return parse_config(in);
}

std::string serialize(const ExperimentConfig& c, bool runtime) {
  std::ostringstream os;
  const auto& m = c.model;
  os << "[model]\n"
     << "dim = " << m.dim << "\n"
     << "particles = " << m.n_particles << "\n"
     << "g = " << fmt17(m.g) << "\n"
     << "adjacency = " << to_string(m.adjacency) << "\n"
     << "dense_threshold = " << m.dense_threshold << "\n"
     << "disorder = " << to_string(m.disorder.kind) << "\n"
     << "disorder_mean = " << fmt17(m.disorder.mean) << "\n"
     << "disorder_sd = " << fmt17(m.disorder.sd) << "\n"
     << "disorder_values = " << join(m.disorder.values) << "\n"
     << "disorder_probabilities = " << join(m.disorder.probabilities) << "\n"
     << "disorder_smear = " << fmt17(m.disorder.smear) << "\n"
     << "interaction_r0 = " << m.interaction.r0 << "\n"
     << "interaction_radial = " << join(m.interaction.radial) << "\n";
  for (const auto* b : {&c.box, &c.box2}) {
    if (!b->has_value()) continue;
    os << "\n[" << (b == &c.box ? "box" : "box2") << "]\n"
       << "center = " << join((*b)->center.coords()) << "\n"
       << "side = " << (*b)->side << "\n";
  }
  const auto& s = c.msa;
  os << "\n[msa]\n"
     << "L0 = " << s.L0 << "\n"
     << "alpha = " << fmt17(s.alpha) << "\n"
     << "beta = " << fmt17(s.beta) << "\n"
     << "gamma = " << fmt17(s.gamma) << "\n"
     << "m0 = " << fmt17(s.m0) << "\n"
     << "p_report = " << opt(s.p_report) << "\n"
     << "q_report = " << opt(s.q_report) << "\n"
     << "J = " << s.J << "\n"
     << "ell = " << s.ell << "\n"
     << "interval = " << fmt17(s.interval_lo) << "," << fmt17(s.interval_hi) << "\n"
     << "literal_mass_product = " << (s.literal_mass_product ? "true" : "false") << "\n";
  os << "\n[experiment]\n"
     << "kind = " << c.kind << "\n"
     << "seed = " << c.seed << "\n"
     << "trials = " << c.trials << "\n"
     << "realization = " << c.realization << "\n"
     << "energy = " << fmt17(c.energy) << "\n"
     << "mass = " << fmt17(c.mass) << "\n"
     << "grid_lo = " << opt(c.grid_lo) << "\n"
     << "grid_hi = " << opt(c.grid_hi) << "\n"
     << "grid_points = " << c.grid_points << "\n"
     << "sub_side = " << c.sub_side << "\n"
     << "stride = " << c.stride << "\n"
     << "cnr_stride = " << c.cnr_stride << "\n"
     << "box_kind = " << to_string(c.box_kind) << "\n"
     << "threshold = " << c.threshold << "\n"
     << "candidate_cap = " << c.candidate_cap << "\n"
     << "scales = " << c.scales << "\n"
     << "source = " << join(c.source) << "\n"
     << "target = " << join(c.target) << "\n"
     << "window_lo = " << opt(c.window_lo) << "\n"
     << "window_hi = " << opt(c.window_hi) << "\n"
     << "shell_statistic = " << (c.shell_statistic == ShellStatistic::max ? "max" : "mean") << "\n"
     << "covering_range = " << c.covering_range << "\n"
     << "samples = " << c.samples << "\n";
  if (runtime) {
    os << "threads = " << c.threads << "\n"
       << "out = " << c.out << "\n";
  }
  return os.str();
}

std::uint64_t config_hash(const ExperimentConfig& cfg) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : serialize(cfg, false)) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string config_hash_hex(const ExperimentConfig& cfg) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(config_hash(cfg)));
  return buf;
}

}  // namespace mpal
