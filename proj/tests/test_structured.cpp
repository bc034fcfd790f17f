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

#include "lqrgame/errors.hpp"
#include "lqrgame/structured.hpp"
#include "oracles.hpp"

using namespace lqrgame;

TEST_CASE("scalar gradient by hand") {
  // A=0, B=1, D=1, Q=1, R=1, K=2: P = 1.25, L = 0.25, G = 0.375.
  const LinearSystem sys(Matrix::Zero(1, 1), Matrix::Ones(1, 1), Vector::Ones(1),
                         Matrix::Ones(1, 1), Matrix::Ones(1, 1), BlockLayout::uniform(1));
  const auto cg = cost_and_gradient(sys, Matrix::Constant(1, 1, 2.0));
  CHECK(cg.J == doctest::Approx(1.25).epsilon(1e-14));
  CHECK(cg.G(0, 0) == doctest::Approx(0.375).epsilon(1e-14));
}

TEST_CASE("gradient matches central differences") {
  std::mt19937_64 gen(42);
  std::normal_distribution<double> nd(0.0, 0.3);
  for (int trial = 0; trial < 6; ++trial) {
    const auto sys = oracle::random_stable_system(gen, 4, 2);
    Matrix k(2, 4);
    for (Eigen::Index i = 0; i < k.size(); ++i) k(i) = nd(gen);
    if (!is_hurwitz(sys.A() - sys.B() * k).hurwitz) continue;
    const auto cg = cost_and_gradient(sys, k);
    const Matrix fd = oracle::fd_gradient(sys, k, 1e-6);
    for (Eigen::Index i = 0; i < k.size(); ++i) {
      CHECK(std::abs(cg.G(i) - fd(i)) <= 1e-4 * std::max(std::abs(fd(i)), 1e-3));
    }
  }
}

TEST_CASE("gradient vanishes at the lqr gain") {
  std::mt19937_64 gen(5);
  const auto sys = oracle::random_stable_system(gen, 5, 2);
  const auto cg = cost_and_gradient(sys, solve_riccati(sys).K);
  CHECK(cg.G.norm() <= 1e-6 * (1.0 + cg.J));
}

TEST_CASE("full mask recovers the riccati optimum") {
  std::mt19937_64 gen(9);
  const auto sys = oracle::random_stable_system(gen, 4, 2);
  const StructuredProblem problem{sys, GainMask::full(2, 4), {}, {}};
  const auto sol = optimize_structured(problem);
  const auto ric = solve_riccati(sys);
  const double j_lqr = sys.D().dot(ric.P * sys.D());
  CHECK(sol.J_star == doctest::Approx(j_lqr).epsilon(1e-9));
  CHECK((sol.K_star - ric.K).norm() <= 1e-5 * (1.0 + ric.K.norm()));
  CHECK(sol.converged);
}

TEST_CASE("zero mask on a stable system is the open loop") {
  std::mt19937_64 gen(1);
  const auto sys = oracle::random_stable_system(gen, 3, 1);
  GainMask mask = GainMask::full(1, 3);
  mask.entries.setZero();
  const auto sol = optimize_structured({sys, mask, {}, {}});
  CHECK(sol.iterations == 0);
  CHECK(sol.K_star.isZero(0.0));
  CHECK(sol.J_star == doctest::Approx(oracle::kron_cost(sys, Matrix::Zero(1, 3))).epsilon(1e-10));
}

TEST_CASE("zero mask on an unstable system has no stabilizing gain") {
  const LinearSystem sys(Matrix::Ones(1, 1), Matrix::Ones(1, 1), Vector::Ones(1),
                         Matrix::Ones(1, 1), Matrix::Ones(1, 1), BlockLayout::uniform(1));
  GainMask mask = GainMask::full(1, 1);
  mask.entries.setZero();
  CHECK_FALSE(find_stabilizing_structured_gain(sys, mask).has_value());
  CHECK_THROWS_AS(optimize_structured({sys, mask, {}, {}}), StabilizabilityError);
  // Full mask returns K_lqr first.
  const auto k = find_stabilizing_structured_gain(sys, GainMask::full(1, 1));
  REQUIRE(k.has_value());
  CHECK((*k - solve_riccati(sys).K).norm() < 1e-12);
}

TEST_CASE("solutions conform to the mask and stabilize") {
  const auto sys = oracle::coupled_pair();
  GainMask mask = GainMask::full(2, 2);
  mask.entries(0, 1) = 0;
  mask.entries(1, 0) = 0;
  const auto sol = optimize_structured({sys, mask, {}, {}});
  CHECK(sol.K_star(0, 1) == 0.0);
  CHECK(sol.K_star(1, 0) == 0.0);
  CHECK(is_hurwitz(sys.A() - sys.B() * sol.K_star).hurwitz);
  CHECK(sol.J_star == doctest::Approx(oracle::kron_cost(sys, sol.K_star)).epsilon(1e-9));
  CHECK_FALSE(sol.initializer.empty());
}

TEST_CASE("fewer free entries never help") {
  std::mt19937_64 gen(21);
  std::bernoulli_distribution coin(0.5);
  for (int trial = 0; trial < 4; ++trial) {
    const auto sys = oracle::random_stable_system(gen, 3, 2);
    GainMask big = GainMask::full(2, 3);
    for (Eigen::Index i = 0; i < big.entries.size(); ++i) big.entries(i) = coin(gen);
    GainMask small = big;
    for (Eigen::Index i = 0; i < small.entries.size(); ++i) {
      if (coin(gen)) small.entries(i) = 0;
    }
    REQUIRE(small.is_below(big));
    const auto sb = optimize_structured({sys, big, {}, {}});
    const auto ss = optimize_structured({sys, small, {}, {}});
    CHECK(ss.J_star >= sb.J_star - 1e-6 * (1.0 + sb.J_star));
  }
}

TEST_CASE("options are validated") {
  OptimizerOptions o;
  CHECK_NOTHROW(o.validate());
  o.backtrack_factor = 1.0;
  CHECK_THROWS_AS(o.validate(), ValidationError);
  o = {};
  o.grad_tol = 0.0;
  CHECK_THROWS_AS(o.validate(), ValidationError);
  const auto sys = oracle::coupled_pair();
  CHECK_THROWS_AS(cost_and_gradient(sys, Matrix::Zero(2, 3)), DimensionError);
}
