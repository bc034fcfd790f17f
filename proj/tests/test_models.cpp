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

#include <Eigen/Eigenvalues>

#include "lqrgame/errors.hpp"
#include "lqrgame/models.hpp"
#include "oracles.hpp"

using namespace lqrgame;

TEST_CASE("laplacian spectrum and row sums") {
  for (std::size_t k = 1; k <= 6; ++k) {
    const Matrix l = consensus_laplacian(k);
    CHECK(l.rowwise().sum().cwiseAbs().maxCoeff() < 1e-14);
    Eigen::SelfAdjointEigenSolver<Matrix> es(l);
    CHECK(std::abs(es.eigenvalues()(0)) < 1e-12);
    for (Eigen::Index i = 1; i < static_cast<Eigen::Index>(k); ++i) {
      CHECK(es.eigenvalues()(i) == doctest::Approx(static_cast<double>(k)));
    }
  }
}

TEST_CASE("laplacian quadratic form is the pairwise sum") {
  std::mt19937_64 gen(2);
  std::normal_distribution<double> nd;
  const Matrix l = consensus_laplacian(3);
  for (int t = 0; t < 20; ++t) {
    Vector x(3);
    for (auto& v : x) v = nd(gen);
    const double pairwise = std::pow(x(0) - x(1), 2) + std::pow(x(0) - x(2), 2) +
                            std::pow(x(1) - x(2), 2);
    CHECK(x.dot(l * x) == doctest::Approx(pairwise).epsilon(1e-12));
  }
}

TEST_CASE("consensus Q is PSD and respects the permutation") {
  ConsensusLayout layout{3, 3, 2, {7, 0, 4, 2, 6, 1, 3, 5}};
  const Matrix q = build_consensus_q(layout);
  CHECK((q - q.transpose()).norm() == 0.0);
  CHECK(Eigen::SelfAdjointEigenSolver<Matrix>(q).eigenvalues().minCoeff() >= -1e-10);
  // Remainder states map to identity entries.
  CHECK(q(3, 3) == 1.0);
  CHECK(q(5, 5) == 1.0);
  CHECK(q(3, 5) == 0.0);

  layout.permutation[1] = 7;
  CHECK_THROWS_AS(build_consensus_q(layout), ValidationError);
  CHECK_THROWS_AS(build_consensus_q(ConsensusLayout{2, 3, 0, {0, 1, 2, 3, 4}}),
                  ValidationError);
}

TEST_CASE("synthetic network structure") {
  const auto sys = build_synthetic_network(4, ring_graph(4));
  CHECK(sys.states() == 8);
  CHECK(sys.inputs() == 4);
  CHECK(sys.layout() == BlockLayout::uniform(4, 2, 1));
  CHECK(oracle::abscissa(sys.A()) < 0.0);
  CHECK(sys.R().isIdentity(0.0));
  CHECK(sys.D()(1) == 1.0);
  CHECK(sys.D().sum() == 1.0);
  for (Eigen::Index i = 0; i < 4; ++i) {
    CHECK(sys.A()(2 * i, 2 * i + 1) == 1.0);
    CHECK(sys.B()(2 * i + 1, i) == 1.0);
    CHECK(sys.B().col(i).sum() == 1.0);
  }
  CHECK((sys.Q() - build_consensus_q(ConsensusLayout::interleaved(4))).norm() == 0.0);
}

TEST_CASE("synthetic network is deterministic per seed") {
  GraphSpec spec = line_graph(3);
  spec.seed = 5;
  const auto a = build_synthetic_network(3, spec);
  const auto b = build_synthetic_network(3, spec);
  CHECK((a.A() - b.A()).norm() == 0.0);
  spec.seed = 6;
  const auto c = build_synthetic_network(3, spec);
  CHECK((a.A() - c.A()).norm() > 0.0);
}

TEST_CASE("synthetic network validation") {
  CHECK_THROWS_AS(build_synthetic_network(1, GraphSpec{}), ValidationError);
  CHECK_THROWS_AS(build_synthetic_network(3, GraphSpec{}), ValidationError);  // disconnected
  GraphSpec spec = ring_graph(3);
  spec.disturbance_node = 4;
  CHECK_THROWS_AS(build_synthetic_network(3, spec), ValidationError);
  spec = ring_graph(3);
  spec.edges.push_back({1, 1, 1.0});
  CHECK_THROWS_AS(build_synthetic_network(3, spec), ValidationError);
  CHECK(complete_graph(4).edges.size() == 6);
}
