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

#include <atomic>
#include <cstdlib>
#include <string>

#include "lqrgame/errors.hpp"
#include "lqrgame/kernels.hpp"

namespace lqrgame::kernels {

namespace {

constexpr KernelTable kScalarTable{scalar::dot, scalar::gemv, scalar::gemv_t};
constexpr KernelTable kAvx2Table{avx2::dot, avx2::gemv, avx2::gemv_t};
constexpr KernelTable kNeonTable{neon::dot, neon::gemv, neon::gemv_t};

Isa initial_isa() {
  if (const char* env = std::getenv("LQRGAME_ISA"); env != nullptr && *env != '\0') {
    const Isa requested = parse_isa(env);
    if (isa_supported(requested)) return requested;
  }
  return detected_isa();
}

std::atomic<Isa>& active_slot() {
  static std::atomic<Isa> slot{initial_isa()};
  return slot;
}

void check_size(std::size_t have, std::size_t want, const char* what) {
  if (have < want) throw DimensionError(std::string("kernel operand too short: ") + what);
}

}  // namespace

bool isa_supported(Isa isa) noexcept {
  switch (isa) {
    case Isa::kScalar:
      return true;
    case Isa::kAvx2:
      return avx2::available();
    case Isa::kNeon:
      return neon::available();
  }
  return false;
}

Isa detected_isa() noexcept {
  if (avx2::available()) return Isa::kAvx2;
  if (neon::available()) return Isa::kNeon;
  return Isa::kScalar;
}

Isa active_isa() noexcept { return active_slot().load(std::memory_order_relaxed); }

void set_isa(Isa isa) {
  if (!isa_supported(isa)) {
    throw ValidationError("instruction set '" + std::string(isa_name(isa)) +
                          "' is not supported on this CPU");
  }
  active_slot().store(isa, std::memory_order_relaxed);
}

std::string_view isa_name(Isa isa) noexcept {
  switch (isa) {
    case Isa::kScalar:
      return "scalar";
    case Isa::kAvx2:
      return "avx2";
    case Isa::kNeon:
      return "neon";
  }
  return "unknown";
}

Isa parse_isa(std::string_view name) {
  if (name == "scalar") return Isa::kScalar;
  if (name == "avx2") return Isa::kAvx2;
  if (name == "neon") return Isa::kNeon;
  throw ValidationError("unknown instruction set '" + std::string(name) + "'");
}

const KernelTable& table(Isa isa) {
  switch (isa) {
    case Isa::kScalar:
      return kScalarTable;
    case Isa::kAvx2:
      return kAvx2Table;
    case Isa::kNeon:
      return kNeonTable;
  }
  return kScalarTable;
}

const KernelTable& active() noexcept { return table(active_isa()); }

double dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw DimensionError("dot: operand length mismatch");
  return active().dot(a.data(), b.data(), a.size());
}

void gemv(std::span<const double> m, std::size_t rows, std::size_t cols,
          std::span<const double> x, std::span<double> y) {
  check_size(m.size(), rows * cols, "matrix");
  check_size(x.size(), cols, "x");
  check_size(y.size(), rows, "y");
  active().gemv(m.data(), rows, cols, x.data(), y.data());
}

void gemv_t(std::span<const double> m, std::size_t rows, std::size_t cols,
            std::span<const double> x, std::span<double> y) {
  check_size(m.size(), rows * cols, "matrix");
  check_size(x.size(), rows, "x");
  check_size(y.size(), cols, "y");
  active().gemv_t(m.data(), rows, cols, x.data(), y.data());
}

}  // namespace lqrgame::kernels
