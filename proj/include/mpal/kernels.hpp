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

// Data-parallel inner loops with a scalar reference implementation and
// vectorised variants picked at runtime from the host CPU. Every variant
// must agree with the scalar reference: bit-for-bit for the integer,
// min/max and division kernels, and to rounding for the dot products.
//
// MPAL_SIMD=scalar in the environment pins the scalar variants.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace mpal::kernels {

enum class Isa { scalar, avx2 };

std::string to_string(Isa isa);
bool isa_available(Isa isa);
std::vector<Isa> available_isas();

/// ISA used by the free functions below.
Isa active_isa();
/// Overrides the runtime choice (tests and benchmarks). Throws if the ISA is
/// not available on this host.
void set_active_isa(Isa isa);

/// Counter/key blocks for Philox4x32-10 in structure-of-arrays layout.
struct PhiloxBatch {
  const std::uint32_t* ctr[4];
  std::uint32_t* out[4];
  std::size_t count;
};

struct KernelTable {
  Isa isa;
  /// Philox4x32 with 10 rounds applied to `count` counters under one key.
  void (*philox4x32_10)(const PhiloxBatch& batch, std::uint32_t k0, std::uint32_t k1);
  /// min_i |v_i - e| (+inf for n = 0).
  double (*min_abs_diff)(const double* v, std::size_t n, double e);
  /// min_{i,j} |a_i - b_j| (+inf if either is empty).
  double (*min_pair_gap)(const double* a, std::size_t na, const double* b, std::size_t nb);
  /// out_i = num_i / (lambda_i - e).
  void (*resolvent_weights)(const double* num, const double* lambda, std::size_t n, double e, double* out);
  /// max_r |sum_c rows[r*ncols + c] * w[c]| over the row-major block.
  double (*max_abs_rowdot)(const double* rows, std::size_t nrows, std::size_t ncols, const double* w);
  /// Index of the first entry of maximal magnitude; n must be positive.
  std::size_t (*argmax_abs)(const double* v, std::size_t n);
};

const KernelTable& table(Isa isa);
const KernelTable& active();

// Scalar reference variants (exposed for the equivalence tests).
namespace scalar {
void philox4x32_10(const PhiloxBatch& batch, std::uint32_t k0, std::uint32_t k1);
double min_abs_diff(const double* v, std::size_t n, double e);
double min_pair_gap(const double* a, std::size_t na, const double* b, std::size_t nb);
void resolvent_weights(const double* num, const double* lambda, std::size_t n, double e, double* out);
double max_abs_rowdot(const double* rows, std::size_t nrows, std::size_t ncols, const double* w);
std::size_t argmax_abs(const double* v, std::size_t n);
}  // namespace scalar

#if defined(MPAL_HAVE_AVX2)
namespace avx2 {
void philox4x32_10(const PhiloxBatch& batch, std::uint32_t k0, std::uint32_t k1);
double min_abs_diff(const double* v, std::size_t n, double e);
double min_pair_gap(const double* a, std::size_t na, const double* b, std::size_t nb);
void resolvent_weights(const double* num, const double* lambda, std::size_t n, double e, double* out);
double max_abs_rowdot(const double* rows, std::size_t nrows, std::size_t ncols, const double* w);
std::size_t argmax_abs(const double* v, std::size_t n);
}  // namespace avx2
#endif

// Convenience wrappers over the active table.
inline double min_abs_diff(std::span<const double> v, double e) { return active().min_abs_diff(v.data(), v.size(), e); }
inline double min_pair_gap(std::span<const double> a, std::span<const double> b) {
  return active().min_pair_gap(a.data(), a.size(), b.data(), b.size());
}
inline std::size_t argmax_abs(std::span<const double> v) { return active().argmax_abs(v.data(), v.size()); }

}  // namespace mpal::kernels
