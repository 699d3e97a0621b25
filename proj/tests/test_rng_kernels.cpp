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

#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "doctest.h"
#include "mpal/kernels.hpp"
#include "mpal/rng.hpp"

using namespace mpal;
namespace k = mpal::kernels;

namespace {

// Restores the runtime ISA choice when a test case ends.
struct IsaGuard {
  k::Isa saved = k::active_isa();
  ~IsaGuard() { k::set_active_isa(saved); }
};

std::vector<double> random_vector(std::mt19937_64& rng, std::size_t n, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> v(n);
  for (auto& x : v) x = u(rng);
  return v;
}

}  // namespace

TEST_CASE("Philox4x32-10 known-answer vectors on every ISA") {
  IsaGuard guard;
  for (k::Isa isa : k::available_isas()) {
    CAPTURE(k::to_string(isa));
    k::set_active_isa(isa);
    CHECK(philox4x32_10({0, 0, 0, 0}, {0, 0}) == PhiloxCounter{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
    CHECK(philox4x32_10({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}) ==
          PhiloxCounter{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
    CHECK(philox4x32_10({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}) ==
          PhiloxCounter{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
  }
}

TEST_CASE("unit_double range") {
  CHECK(unit_double(0, 0) == 0.0);
  const double top = unit_double(0xffffffff, 0xffffffff);
  CHECK(top < 1.0);
  CHECK(top == 1.0 - 0x1.0p-53);
  CHECK(unit_double_open0(0xffffffff, 0xffffffff) > 0.0);
  CHECK(unit_double_open0(0, 0) == 1.0);
}

TEST_CASE("scalar is always available and the override works") {
  IsaGuard guard;
  CHECK(k::isa_available(k::Isa::scalar));
  k::set_active_isa(k::Isa::scalar);
  CHECK(k::active_isa() == k::Isa::scalar);
  CHECK(k::active().isa == k::Isa::scalar);
  if (!k::isa_available(k::Isa::avx2)) CHECK_THROWS(k::set_active_isa(k::Isa::avx2));
}

TEST_CASE("vector kernels match the scalar reference") {
  const auto& ref = k::table(k::Isa::scalar);
  std::mt19937_64 rng(17);
  for (k::Isa isa : k::available_isas()) {
    CAPTURE(k::to_string(isa));
    const auto& t = k::table(isa);
    // Lengths straddle the vector width and its tails.
    for (std::size_t n : {0u, 1u, 3u, 4u, 5u, 7u, 8u, 9u, 15u, 16u, 17u, 63u, 100u, 257u}) {
      CAPTURE(n);
      std::vector<std::uint32_t> c[4], o_ref[4], o_t[4];
      for (int w = 0; w < 4; ++w) {
        c[w].resize(n);
        o_ref[w].resize(n);
        o_t[w].resize(n);
        for (auto& x : c[w]) x = static_cast<std::uint32_t>(rng());
      }
      k::PhiloxBatch br{{c[0].data(), c[1].data(), c[2].data(), c[3].data()},
                        {o_ref[0].data(), o_ref[1].data(), o_ref[2].data(), o_ref[3].data()},
                        n};
      k::PhiloxBatch bt{{c[0].data(), c[1].data(), c[2].data(), c[3].data()},
                        {o_t[0].data(), o_t[1].data(), o_t[2].data(), o_t[3].data()},
                        n};
      ref.philox4x32_10(br, 0x1234567u, 0x89abcdefu);
      t.philox4x32_10(bt, 0x1234567u, 0x89abcdefu);
      for (int w = 0; w < 4; ++w) CHECK(o_ref[w] == o_t[w]);

      const auto v = random_vector(rng, n, -5.0, 5.0);
      const auto b = random_vector(rng, n / 2 + 1, -5.0, 5.0);
      const double e = 0.37;
      CHECK(t.min_abs_diff(v.data(), n, e) == ref.min_abs_diff(v.data(), n, e));
      CHECK(t.min_pair_gap(v.data(), n, b.data(), b.size()) == ref.min_pair_gap(v.data(), n, b.data(), b.size()));
      std::vector<double> w_ref(n), w_t(n);
      ref.resolvent_weights(v.data(), b.data(), std::min(n, b.size()), e, w_ref.data());
      t.resolvent_weights(v.data(), b.data(), std::min(n, b.size()), e, w_t.data());
      CHECK(w_ref == w_t);
      if (n > 0) {
        CHECK(t.argmax_abs(v.data(), n) == ref.argmax_abs(v.data(), n));
        const std::size_t rows = 1 + n % 7;
        const auto block = random_vector(rng, rows * n, -1.0, 1.0);
        const double a = ref.max_abs_rowdot(block.data(), rows, n, v.data());
        const double s = t.max_abs_rowdot(block.data(), rows, n, v.data());
        CHECK(s == doctest::Approx(a).epsilon(1e-13));
      }
    }
  }
}

TEST_CASE("kernel edge cases") {
  for (k::Isa isa : k::available_isas()) {
    const auto& t = k::table(isa);
    CHECK(t.min_abs_diff(nullptr, 0, 1.0) == std::numeric_limits<double>::infinity());
    const double a[] = {1.0, 2.0};
    CHECK(t.min_pair_gap(a, 2, nullptr, 0) == std::numeric_limits<double>::infinity());
    // Ties resolve to the first index, including across vector lanes.
    const std::vector<double> tie{0.5, -3.0, 3.0, 1.0, -3.0, 0.0, 3.0, 2.0, -3.0};
    CHECK(t.argmax_abs(tie.data(), tie.size()) == 1);
    std::vector<double> late(37, 0.25);
    late[33] = -9.0;
    CHECK(t.argmax_abs(late.data(), late.size()) == 33);
    const std::vector<double> flat(19, 0.1);
    CHECK(t.argmax_abs(flat.data(), flat.size()) == 0);
  }
}
