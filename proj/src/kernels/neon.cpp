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

#if defined(__aarch64__) && defined(__ARM_NEON)
#define LQRGAME_NEON 1
#include <arm_neon.h>
#else
#define LQRGAME_NEON 0
#endif

namespace lqrgame::kernels::neon {

#if LQRGAME_NEON

// Advanced SIMD is mandatory on AArch64.
bool available() noexcept { return true; }

double dot(const double* a, const double* b, std::size_t n) {
  float64x2_t acc0 = vdupq_n_f64(0.0);
  float64x2_t acc1 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc0 = vfmaq_f64(acc0, vld1q_f64(a + i), vld1q_f64(b + i));
    acc1 = vfmaq_f64(acc1, vld1q_f64(a + i + 2), vld1q_f64(b + i + 2));
  }
  double acc = vaddvq_f64(vaddq_f64(acc0, acc1));
  for (; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

void gemv(const double* m, std::size_t rows, std::size_t cols, const double* x,
          double* y) {
  for (std::size_t i = 0; i < rows; ++i) y[i] = dot(m + i * cols, x, cols);
}

void gemv_t(const double* m, std::size_t rows, std::size_t cols, const double* x,
            double* y) {
  for (std::size_t j = 0; j < cols; ++j) y[j] = 0.0;
  for (std::size_t i = 0; i < rows; ++i) {
    const float64x2_t xi = vdupq_n_f64(x[i]);
    const double* row = m + i * cols;
    std::size_t j = 0;
    for (; j + 2 <= cols; j += 2) {
      vst1q_f64(y + j, vfmaq_f64(vld1q_f64(y + j), xi, vld1q_f64(row + j)));
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

}  // namespace lqrgame::kernels::neon
