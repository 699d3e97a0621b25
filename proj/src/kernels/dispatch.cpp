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

#include <atomic>
#include <cstdlib>
#include <string_view>

#include "mpal/errors.hpp"
#include "mpal/kernels.hpp"

namespace mpal::kernels {

namespace {

constexpr KernelTable kScalar{Isa::scalar,
                              scalar::philox4x32_10,
                              scalar::min_abs_diff,
                              scalar::min_pair_gap,
                              scalar::resolvent_weights,
                              scalar::max_abs_rowdot,
                              scalar::argmax_abs};

#if defined(MPAL_HAVE_AVX2)
constexpr KernelTable kAvx2{Isa::avx2,
                            avx2::philox4x32_10,
                            avx2::min_abs_diff,
                            avx2::min_pair_gap,
                            avx2::resolvent_weights,
                            avx2::max_abs_rowdot,
                            avx2::argmax_abs};
#endif

bool host_has_avx2() {
#if defined(MPAL_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Isa detect() {
  if (const char* env = std::getenv("MPAL_SIMD")) {
    if (std::string_view(env) == "scalar") return Isa::scalar;
  }
  return host_has_avx2() ? Isa::avx2 : Isa::scalar;
}

std::atomic<const KernelTable*>& slot() {
  static std::atomic<const KernelTable*> current{&table(detect())};
  return current;
}

}  // namespace

std::string to_string(Isa isa) { return isa == Isa::avx2 ? "avx2" : "scalar"; }

bool isa_available(Isa isa) { return isa == Isa::scalar || host_has_avx2(); }

std::vector<Isa> available_isas() {
  std::vector<Isa> out{Isa::scalar};
  if (host_has_avx2()) out.push_back(Isa::avx2);
  return out;
}

const KernelTable& table(Isa isa) {
#if defined(MPAL_HAVE_AVX2)
  if (isa == Isa::avx2) {
    if (!host_has_avx2()) throw Error("AVX2 kernels requested on a host without AVX2/FMA");
    return kAvx2;
  }
#else
  if (isa == Isa::avx2) throw Error("this build has no AVX2 kernels");
#endif
  return kScalar;
}

const KernelTable& active() { return *slot().load(std::memory_order_relaxed); }

Isa active_isa() { return active().isa; }

void set_active_isa(Isa isa) { slot().store(&table(isa), std::memory_order_relaxed); }

}  // namespace mpal::kernels
