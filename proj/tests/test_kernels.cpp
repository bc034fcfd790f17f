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

#include <doctest.h>

#include <random>
#include <vector>

#include "lqrgame/errors.hpp"
#include "lqrgame/kernels.hpp"

using namespace lqrgame::kernels;

namespace {

std::vector<double> random_vector(std::mt19937_64& gen, std::size_t n) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> v(n);
  for (auto& x : v) x = u(gen);
  return v;
}

// Every supported vector variant against the scalar reference, across sizes
// that exercise the remainder loops.
void check_equivalence(Isa isa) {
  const KernelTable& ref = table(Isa::kScalar);
  const KernelTable& vec = table(isa);
  std::mt19937_64 gen(3);
  for (std::size_t n : {0, 1, 2, 3, 4, 5, 7, 8, 9, 15, 16, 17, 31, 64, 65, 256}) {
    const auto a = random_vector(gen, n);
    const auto b = random_vector(gen, n);
    const double want = ref.dot(a.data(), b.data(), n);
    CHECK(vec.dot(a.data(), b.data(), n) ==
          doctest::Approx(want).epsilon(1e-13).scale(static_cast<double>(n) + 1.0));
  }
  for (std::size_t rows : {1, 3, 4, 8, 13}) {
    for (std::size_t cols : {1, 2, 5, 8, 16, 19}) {
      const auto m = random_vector(gen, rows * cols);
      const auto x = random_vector(gen, cols);
      const auto xt = random_vector(gen, rows);
      std::vector<double> y0(rows), y1(rows), z0(cols), z1(cols);
      ref.gemv(m.data(), rows, cols, x.data(), y0.data());
      vec.gemv(m.data(), rows, cols, x.data(), y1.data());
      ref.gemv_t(m.data(), rows, cols, xt.data(), z0.data());
      vec.gemv_t(m.data(), rows, cols, xt.data(), z1.data());
      for (std::size_t i = 0; i < rows; ++i) CHECK(std::abs(y0[i] - y1[i]) <= 1e-13 * cols);
      for (std::size_t j = 0; j < cols; ++j) CHECK(std::abs(z0[j] - z1[j]) <= 1e-13 * rows);
    }
  }
}

}  // namespace

TEST_CASE("scalar reference values") {
  const double a[] = {1, 2, 3};
  const double b[] = {4, 5, 6};
  CHECK(scalar::dot(a, b, 3) == 32.0);
  const double m[] = {1, 2, 3, 4, 5, 6};  // 2 x 3 row-major
  const double x[] = {1, 0, -1};
  double y[2];
  scalar::gemv(m, 2, 3, x, y);
  CHECK(y[0] == -2.0);
  CHECK(y[1] == -2.0);
  const double w[] = {1, 1};
  double z[3];
  scalar::gemv_t(m, 2, 3, w, z);
  CHECK(z[0] == 5.0);
  CHECK(z[2] == 9.0);
}

TEST_CASE("avx2 matches scalar") {
  if (!isa_supported(Isa::kAvx2)) {
    MESSAGE("avx2 not available on this CPU; skipped");
    return;
  }
  check_equivalence(Isa::kAvx2);
}

TEST_CASE("neon matches scalar") {
  if (!isa_supported(Isa::kNeon)) {
    MESSAGE("neon not available on this CPU; skipped");
    return;
  }
  check_equivalence(Isa::kNeon);
}

TEST_CASE("runtime selection") {
  CHECK(isa_supported(Isa::kScalar));
  CHECK(isa_supported(detected_isa()));
  const Isa before = active_isa();
  set_isa(Isa::kScalar);
  CHECK(active_isa() == Isa::kScalar);
  CHECK(&active() == &table(Isa::kScalar));
  set_isa(before);
  CHECK(parse_isa("scalar") == Isa::kScalar);
  CHECK(isa_name(Isa::kAvx2) == "avx2");
  CHECK_THROWS_AS(parse_isa("sse9"), lqrgame::ValidationError);
  if (!isa_supported(Isa::kNeon)) CHECK_THROWS_AS(set_isa(Isa::kNeon), lqrgame::ValidationError);
}

TEST_CASE("span wrappers check sizes") {
  std::vector<double> a(4, 1.0), b(3, 1.0);
  CHECK_THROWS_AS(dot(a, b), lqrgame::DimensionError);
  CHECK(dot(a, a) == 4.0);
}
