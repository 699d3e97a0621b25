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

#include "mpal/kernels.hpp"

namespace mpal::kernels::scalar {

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& lo, std::uint32_t& hi) {
  const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
  lo = static_cast<std::uint32_t>(p);
  hi = static_cast<std::uint32_t>(p >> 32);
}

}  // namespace

void philox4x32_10(const PhiloxBatch& batch, std::uint32_t k0, std::uint32_t k1) {
  for (std::size_t i = 0; i < batch.count; ++i) {
    std::uint32_t c0 = batch.ctr[0][i], c1 = batch.ctr[1][i], c2 = batch.ctr[2][i], c3 = batch.ctr[3][i];
    std::uint32_t key0 = k0, key1 = k1;
    for (int round = 0; round < 10; ++round) {
      std::uint32_t lo0, hi0, lo1, hi1;
      mulhilo(kMul0, c0, lo0, hi0);
      mulhilo(kMul1, c2, lo1, hi1);
      const std::uint32_t n0 = hi1 ^ c1 ^ key0;
      const std::uint32_t n2 = hi0 ^ c3 ^ key1;
      c0 = n0;
      c1 = lo1;
      c2 = n2;
      c3 = lo0;
      key0 += kWeyl0;
      key1 += kWeyl1;
    }
    batch.out[0][i] = c0;
    batch.out[1][i] = c1;
    batch.out[2][i] = c2;
    batch.out[3][i] = c3;
  }
}

double min_abs_diff(const double* v, std::size_t n, double e) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    const double d = std::fabs(v[i] - e);
    if (d < best) best = d;
  }
  return best;
}

double min_pair_gap(const double* a, std::size_t na, const double* b, std::size_t nb) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < na; ++i) {
    for (std::size_t j = 0; j < nb; ++j) {
      const double d = std::fabs(a[i] - b[j]);
      if (d < best) best = d;
    }
  }
  return best;
}

void resolvent_weights(const double* num, const double* lambda, std::size_t n, double e, double* out) {
  for (std::size_t i = 0; i < n; ++i) out[i] = num[i] / (lambda[i] - e);
}

double max_abs_rowdot(const double* rows, std::size_t nrows, std::size_t ncols, const double* w) {
  double best = 0.0;
  for (std::size_t r = 0; r < nrows; ++r) {
    const double* row = rows + r * ncols;
    double s = 0.0;
    for (std::size_t c = 0; c < ncols; ++c) s += row[c] * w[c];
    best = std::fmax(best, std::fabs(s));
  }
  return best;
}

std::size_t argmax_abs(const double* v, std::size_t n) {
  std::size_t arg = 0;
  double best = std::fabs(v[0]);
  for (std::size_t i = 1; i < n; ++i) {
    const double a = std::fabs(v[i]);
    if (a > best) {
      best = a;
      arg = i;
    }
  }
  return arg;
}

}  // namespace mpal::kernels::scalar
