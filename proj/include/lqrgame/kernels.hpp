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

#pragma once

// Dense inner loops of the game solver (dot products, row-major matrix-vector
// products, bilinear forms). Each kernel has a scalar reference version and
// vectorized variants; the active variant is chosen at runtime from the CPU
// features, or forced with set_isa() / the LQRGAME_ISA environment variable.

#include <cstddef>
#include <span>
#include <string_view>

namespace lqrgame::kernels {

enum class Isa { kScalar, kAvx2, kNeon };

struct KernelTable {
  double (*dot)(const double* a, const double* b, std::size_t n);
  // y = M x for row-major M (rows x cols).
  void (*gemv)(const double* m, std::size_t rows, std::size_t cols, const double* x,
               double* y);
  // y = M^T x for row-major M (rows x cols); y has cols entries.
  void (*gemv_t)(const double* m, std::size_t rows, std::size_t cols,
                 const double* x, double* y);
};

namespace scalar {
double dot(const double* a, const double* b, std::size_t n);
void gemv(const double* m, std::size_t rows, std::size_t cols, const double* x,
          double* y);
void gemv_t(const double* m, std::size_t rows, std::size_t cols, const double* x,
            double* y);
}  // namespace scalar

namespace avx2 {
bool available() noexcept;
double dot(const double* a, const double* b, std::size_t n);
void gemv(const double* m, std::size_t rows, std::size_t cols, const double* x,
          double* y);
void gemv_t(const double* m, std::size_t rows, std::size_t cols, const double* x,
            double* y);
}  // namespace avx2

namespace neon {
bool available() noexcept;
double dot(const double* a, const double* b, std::size_t n);
void gemv(const double* m, std::size_t rows, std::size_t cols, const double* x,
          double* y);
void gemv_t(const double* m, std::size_t rows, std::size_t cols, const double* x,
            double* y);
}  // namespace neon

bool isa_supported(Isa isa) noexcept;
Isa detected_isa() noexcept;
Isa active_isa() noexcept;
// Throws ValidationError if the CPU lacks the requested extension.
void set_isa(Isa isa);
std::string_view isa_name(Isa isa) noexcept;
Isa parse_isa(std::string_view name);

const KernelTable& table(Isa isa);
const KernelTable& active() noexcept;

// Span wrappers over the active kernels.
double dot(std::span<const double> a, std::span<const double> b);
void gemv(std::span<const double> m, std::size_t rows, std::size_t cols,
          std::span<const double> x, std::span<double> y);
void gemv_t(std::span<const double> m, std::size_t rows, std::size_t cols,
            std::span<const double> x, std::span<double> y);

}  // namespace lqrgame::kernels
