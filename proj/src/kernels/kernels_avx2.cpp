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

// AVX2/FMA variants. This translation unit is compiled with -mavx2 -mfma and
// is only entered after the dispatcher has confirmed host support.

#include <immintrin.h>

#include <cmath>
#include <limits>

#include "mpal/kernels.hpp"

namespace mpal::kernels::avx2 {

namespace {

inline __m256d abs_pd(__m256d x) { return _mm256_andnot_pd(_mm256_set1_pd(-0.0), x); }

inline double hmin(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_min_pd(lo, hi);
  lo = _mm_min_sd(lo, _mm_unpackhi_pd(lo, lo));
  return _mm_cvtsd_f64(lo);
}

inline double hmax(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_max_pd(lo, hi);
  lo = _mm_max_sd(lo, _mm_unpackhi_pd(lo, lo));
  return _mm_cvtsd_f64(lo);
}

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  lo = _mm_add_sd(lo, _mm_unpackhi_pd(lo, lo));
  return _mm_cvtsd_f64(lo);
}

// 32x32 -> 64 multiply of all eight lanes against a broadcast constant.
inline void mulhilo8(__m256i a, __m256i m, __m256i& lo, __m256i& hi) {
  const __m256i even = _mm256_mul_epu32(a, m);
  const __m256i odd = _mm256_mul_epu32(_mm256_srli_epi64(a, 32), m);
  lo = _mm256_blend_epi32(even, _mm256_slli_epi64(odd, 32), 0xAA);
  hi = _mm256_blend_epi32(_mm256_srli_epi64(even, 32), odd, 0xAA);
}

}  // namespace

void philox4x32_10(const PhiloxBatch& batch, std::uint32_t k0, std::uint32_t k1) {
  const __m256i m0 = _mm256_set1_epi32(static_cast<int>(0xD2511F53u));
  const __m256i m1 = _mm256_set1_epi32(static_cast<int>(0xCD9E8D57u));
  std::size_t i = 0;
  for (; i + 8 <= batch.count; i += 8) {
    __m256i c0 = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(batch.ctr[0] + i));
    __m256i c1 = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(batch.ctr[1] + i));
    __m256i c2 = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(batch.ctr[2] + i));
    __m256i c3 = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(batch.ctr[3] + i));
    std::uint32_t key0 = k0, key1 = k1;
    for (int round = 0; round < 10; ++round) {
      __m256i lo0, hi0, lo1, hi1;
      mulhilo8(c0, m0, lo0, hi0);
      mulhilo8(c2, m1, lo1, hi1);
      const __m256i kk0 = _mm256_set1_epi32(static_cast<int>(key0));
      const __m256i kk1 = _mm256_set1_epi32(static_cast<int>(key1));
      c0 = _mm256_xor_si256(_mm256_xor_si256(hi1, c1), kk0);
      c1 = lo1;
      c2 = _mm256_xor_si256(_mm256_xor_si256(hi0, c3), kk1);
      c3 = lo0;
      key0 += 0x9E3779B9u;
      key1 += 0xBB67AE85u;
    }
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(batch.out[0] + i), c0);
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(batch.out[1] + i), c1);
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(batch.out[2] + i), c2);
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(batch.out[3] + i), c3);
  }
  if (i < batch.count) {
    PhiloxBatch tail{{batch.ctr[0] + i, batch.ctr[1] + i, batch.ctr[2] + i, batch.ctr[3] + i},
                     {batch.out[0] + i, batch.out[1] + i, batch.out[2] + i, batch.out[3] + i},
                     batch.count - i};
    scalar::philox4x32_10(tail, k0, k1);
  }
}

double min_abs_diff(const double* v, std::size_t n, double e) {
  const __m256d ve = _mm256_set1_pd(e);
  __m256d best = _mm256_set1_pd(std::numeric_limits<double>::infinity());
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    best = _mm256_min_pd(best, abs_pd(_mm256_sub_pd(_mm256_loadu_pd(v + i), ve)));
  }
  double out = hmin(best);
  for (; i < n; ++i) out = std::fmin(out, std::fabs(v[i] - e));
  return out;
}

double min_pair_gap(const double* a, std::size_t na, const double* b, std::size_t nb) {
  double out = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < na; ++i) out = std::fmin(out, min_abs_diff(b, nb, a[i]));
  return out;
}

void resolvent_weights(const double* num, const double* lambda, std::size_t n, double e, double* out) {
  const __m256d ve = _mm256_set1_pd(e);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d den = _mm256_sub_pd(_mm256_loadu_pd(lambda + i), ve);
    _mm256_storeu_pd(out + i, _mm256_div_pd(_mm256_loadu_pd(num + i), den));
  }
  for (; i < n; ++i) out[i] = num[i] / (lambda[i] - e);
}

double max_abs_rowdot(const double* rows, std::size_t nrows, std::size_t ncols, const double* w) {
  double best = 0.0;
  for (std::size_t r = 0; r < nrows; ++r) {
    const double* row = rows + r * ncols;
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t c = 0;
    for (; c + 8 <= ncols; c += 8) {
      acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(row + c), _mm256_loadu_pd(w + c), acc0);
      acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(row + c + 4), _mm256_loadu_pd(w + c + 4), acc1);
    }
    for (; c + 4 <= ncols; c += 4) {
      acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(row + c), _mm256_loadu_pd(w + c), acc0);
    }
    double s = hsum(_mm256_add_pd(acc0, acc1));
    for (; c < ncols; ++c) s += row[c] * w[c];
    best = std::fmax(best, std::fabs(s));
  }
  return best;
}

std::size_t argmax_abs(const double* v, std::size_t n) {
  __m256d best = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) best = _mm256_max_pd(best, abs_pd(_mm256_loadu_pd(v + i)));
  double top = hmax(best);
  for (; i < n; ++i) top = std::fmax(top, std::fabs(v[i]));
  for (std::size_t k = 0; k < n; ++k) {
    if (std::fabs(v[k]) == top) return k;
  }
  return 0;
}

}  // namespace mpal::kernels::avx2
