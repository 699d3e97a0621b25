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

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "json.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(MPAL_CLI_PATH) + " " + args + " 2>&1";
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  char buf[4096];
  std::size_t n = 0;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
  const int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("mpal_cli_" + std::to_string(::getpid()) + "_" + std::to_string(counter()++));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  static int& counter() {
    static int c = 0;
    return c;
  }
};

fs::path write_config(const TempDir& dir, const std::string& text) {
  const auto p = dir.path / "run.cfg";
  std::ofstream(p, std::ios::binary) << text;
  return p;
}

const char* kPair = R"([model]
dim = 1
particles = 1
g = 5
[box]
center = 0
side = 8
[box2]
center = 60
side = 8
[experiment]
trials = 300
seed = 17
)";

}  // namespace

TEST_CASE("configuration errors exit with status 2") {
  TempDir dir;
  const auto zero = write_config(dir, "[model]\ndim = 1\n[box]\ncenter = 0\nside = 4\n[experiment]\ntrials = 0\n");
  const auto r = run("mc-wegner --config " + zero.string() + " --out " + dir.path.string());
  CHECK(r.code == 2);
  CHECK(r.out.find("line 7") != std::string::npos);

  const auto typo = write_config(dir, "[model]\ndimm = 1\n");
  const auto t = run("classify --config " + typo.string());
  CHECK(t.code == 2);
  CHECK(t.out.find("line 2") != std::string::npos);

  CHECK(run("no-such-kind").code == 2);
  CHECK(run("").code == 2);
  CHECK(run("--version").code == 0);
}

TEST_CASE("summary CSV bytes do not depend on the thread count") {
  TempDir dir;
  const auto cfg = write_config(dir, kPair);
  for (int threads : {1, 8}) {
    const auto out = dir.path / ("t" + std::to_string(threads));
    const auto r = run("mc-wegner --config " + cfg.string() + " --threads " + std::to_string(threads) + " --out " +
                       out.string());
    REQUIRE(r.code == 0);
  }
  const auto a = slurp(dir.path / "t1" / "mc-wegner.summary.csv");
  const auto b = slurp(dir.path / "t8" / "mc-wegner.summary.csv");
  CHECK_FALSE(a.empty());
  CHECK(a == b);
  CHECK(a.find('\r') == std::string::npos);
  CHECK(slurp(dir.path / "t1" / "mc-wegner.jsonl") == slurp(dir.path / "t8" / "mc-wegner.jsonl"));

  // THREADS is honoured when the flag is absent, and the seed flag changes the run.
  const auto env = dir.path / "env";
  REQUIRE(run("mc-wegner --config " + cfg.string() + " --out " + env.string()).code == 0);
  CHECK(slurp(env / "mc-wegner.summary.csv") == a);
  const auto other = dir.path / "seed";
  REQUIRE(run("mc-wegner --config " + cfg.string() + " --seed 18 --out " + other.string()).code == 0);
  CHECK(slurp(other / "mc-wegner.summary.csv") != a);
}

TEST_CASE("classify is deterministic and every output names the configuration") {
  TempDir dir;
  const auto cfg = write_config(dir, "[model]\ndim = 1\nparticles = 2\ng = 4\n[box]\ncenter = 0, 1\nside = 6\n"
                                     "[experiment]\nseed = 3\nenergy = 0.2\nmass = 0.3\n");
  REQUIRE(run("classify --config " + cfg.string() + " --out " + (dir.path / "a").string()).code == 0);
  REQUIRE(run("classify --config " + cfg.string() + " --out " + (dir.path / "b").string() + " --threads 4").code == 0);
  const auto a = slurp(dir.path / "a" / "classify.jsonl");
  CHECK(a == slurp(dir.path / "b" / "classify.jsonl"));

  std::istringstream lines(a);
  std::string meta, record;
  std::getline(lines, meta);
  std::getline(lines, record);
  const auto m = nlohmann::json::parse(meta);
  const auto rec = nlohmann::json::parse(record);
  CHECK(m.contains("config_hash"));
  CHECK(m["version"] == "0.1.0");
  CHECK(rec.contains("CNR"));
  CHECK(rec["type"] == "realization");
  const auto resolved = slurp(dir.path / "a" / "classify.resolved.cfg");
  CHECK(resolved.find(m["config_hash"].get<std::string>()) != std::string::npos);

  // The resolved configuration reproduces the run.
  REQUIRE(run("classify --config " + (dir.path / "a" / "classify.resolved.cfg").string() + " --out " +
              (dir.path / "c").string())
              .code == 0);
  CHECK(slurp(dir.path / "c" / "classify.jsonl") == a);
}

TEST_CASE("every subcommand runs on a small configuration") {
  TempDir dir;
  const auto cfg = write_config(dir, R"([model]
dim = 1
particles = 2
g = 6
[box]
center = 0, 1
side = 6
[box2]
center = 30, 31
side = 6
[experiment]
trials = 4
grid_points = 8
sub_side = 2
stride = 2
covering_range = 10
samples = 200
)");
  for (const char* kind : {"assemble", "spectrum", "green", "classify", "geometry-check", "scales", "mc-wegner",
                           "mc-s0", "mc-ds", "mc-count", "jns-check", "decay"}) {
    CAPTURE(kind);
    const auto r = run(std::string(kind) + " --config " + cfg.string() + " --out " + (dir.path / kind).string());
    CHECK(r.code == 0);
    CHECK(fs::exists(dir.path / kind / (std::string(kind) + ".resolved.cfg")));
    CHECK(fs::exists(dir.path / kind / (std::string(kind) + ".jsonl")));
  }
  CHECK(fs::exists(dir.path / "assemble" / "assemble.mtx"));
  CHECK(fs::exists(dir.path / "decay" / "decay.csv"));
  const auto printed = run("scales --config " + cfg.string() + " --print-config");
  CHECK(printed.code == 0);
  CHECK(printed.out.find("[experiment]") != std::string::npos);
}
