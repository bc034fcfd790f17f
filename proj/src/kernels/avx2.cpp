// Copyright 2026 The lqrgame Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "lqrgame/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)
#define LQRGAME_X86 1
#include <immintrin.h>
#else
#define LQRGAME_X86 0
#endif

namespace lqrgame::kernels::avx2 {

#if LQRGAME_X86

bool available() noexcept {
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
}

namespace {

__attribute__((target("avx2,fma"))) inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d sum = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(sum, _mm_unpackhi_pd(sum, sum)));
}

}  // namespace

__attribute__((target("avx2,fma"))) double dot(const double* a, const double* b,
                                               std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4),
                           acc1);
  }
  if (i + 4 <= n) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    i += 4;
  }
  double acc = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

__attribute__((target("avx2,fma"))) void gemv(const double* m, std::size_t rows,
                                              std::size_t cols, const double* x,
                                              double* y) {
  for (std::size_t i = 0; i < rows; ++i) y[i] = dot(m + i * cols, x, cols);
}

__attribute__((target("avx2,fma"))) void gemv_t(const double* m, std::size_t rows,
                                                std::size_t cols, const double* x,
                                                double* y) {
  for (std::size_t j = 0; j < cols; ++j) y[j] = 0.0;
  for (std::size_t i = 0; i < rows; ++i) {
    const __m256d xi = _mm256_set1_pd(x[i]);
    const double* row = m + i * cols;
    std::size_t j = 0;
    for (; j + 4 <= cols; j += 4) {
      _mm256_storeu_pd(y + j, _mm256_fmadd_pd(xi, _mm256_loadu_pd(row + j),
                                              _mm256_loadu_pd(y + j)));
    }
    for (; j < cols; ++j) y[j] += x[i] * row[j];
  }
}

#else

bool available() noexcept { return false; }
double dot(const double* a, const double* b, std::size_t n) {
  return scalar::dot(a, b, n);
}
void gemv(const double* m, std::size_t rows, std::size_t cols, const double* x,
          double* y) {
  scalar::gemv(m, rows, cols, x, y);
}
void gemv_t(const double* m, std::size_t rows, std::size_t cols, const double* x,
            double* y) {
  scalar::gemv_t(m, rows, cols, x, y);
}

#endif

}  // namespace lqrgame::kernels::avx2
