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

#include "lqrgame/models.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "lqrgame/errors.hpp"
#include "lqrgame/rng.hpp"

namespace lqrgame {

Matrix consensus_laplacian(std::size_t k) {
  if (k == 0) throw ValidationError("consensus block size must be at least 1");
  const auto size = static_cast<Eigen::Index>(k);
  return static_cast<double>(k) * Matrix::Identity(size, size) - Matrix::Ones(size, size);
}

ConsensusLayout ConsensusLayout::identity(std::size_t n_angles, std::size_t n_rem) {
  ConsensusLayout layout{n_angles, n_angles, n_rem, {}};
  layout.permutation.resize(layout.total());
  std::iota(layout.permutation.begin(), layout.permutation.end(), std::size_t{0});
  return layout;
}

ConsensusLayout ConsensusLayout::interleaved(std::size_t nodes) {
  ConsensusLayout layout{nodes, nodes, 0, {}};
  layout.permutation.resize(2 * nodes);
  for (std::size_t i = 0; i < nodes; ++i) {
    layout.permutation[i] = 2 * i;
    layout.permutation[nodes + i] = 2 * i + 1;
  }
  return layout;
}

Matrix build_consensus_q(const ConsensusLayout& layout) {
  if (layout.n_angles != layout.n_freqs) {
    throw ValidationError("consensus layout needs as many frequency as angle states");
  }
  const std::size_t total = layout.total();
  if (layout.permutation.size() != total) {
    throw ValidationError("consensus layout permutation has " +
                          std::to_string(layout.permutation.size()) + " entries, expected " +
                          std::to_string(total));
  }
  std::vector<bool> seen(total, false);
  for (auto p : layout.permutation) {
    if (p >= total || seen[p]) {
      throw ValidationError("consensus layout permutation is not a bijection");
    }
    seen[p] = true;
  }

  const auto size = static_cast<Eigen::Index>(total);
  const auto k = static_cast<Eigen::Index>(layout.n_angles);
  Matrix stacked = Matrix::Zero(size, size);
  if (k > 0) {
    const Matrix lap = consensus_laplacian(layout.n_angles);
    stacked.block(0, 0, k, k) = lap;
    stacked.block(k, k, k, k) = lap;
  }
  const auto rem = static_cast<Eigen::Index>(layout.n_rem);
  stacked.block(2 * k, 2 * k, rem, rem).setIdentity();

  Matrix q(size, size);
  for (Eigen::Index a = 0; a < size; ++a) {
    for (Eigen::Index b = 0; b < size; ++b) {
      q(static_cast<Eigen::Index>(layout.permutation[static_cast<std::size_t>(a)]),
        static_cast<Eigen::Index>(layout.permutation[static_cast<std::size_t>(b)])) =
          stacked(a, b);
    }
  }
  return q;
}

GraphSpec ring_graph(std::size_t nodes, double weight) {
  GraphSpec spec;
  if (nodes == 2) {
    spec.edges.push_back({1, 2, weight});
  } else if (nodes > 2) {
    for (std::size_t i = 1; i <= nodes; ++i) spec.edges.push_back({i, i % nodes + 1, weight});
  }
  return spec;
}

GraphSpec line_graph(std::size_t nodes, double weight) {
  GraphSpec spec;
  for (std::size_t i = 1; i < nodes; ++i) spec.edges.push_back({i, i + 1, weight});
  return spec;
}

GraphSpec complete_graph(std::size_t nodes, double weight) {
  GraphSpec spec;
  for (std::size_t i = 1; i <= nodes; ++i) {
    for (std::size_t j = i + 1; j <= nodes; ++j) spec.edges.push_back({i, j, weight});
  }
  return spec;
}

namespace {

bool connected(std::size_t nodes, const std::vector<Edge>& edges) {
  std::vector<std::size_t> parent(nodes);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& e : edges) parent[find(e.from - 1)] = find(e.to - 1);
  const std::size_t root = find(0);
  for (std::size_t i = 1; i < nodes; ++i) {
    if (find(i) != root) return false;
  }
  return true;
}

}  // namespace

LinearSystem build_synthetic_network(std::size_t nodes, const GraphSpec& graph) {
  if (nodes < 2) throw ValidationError("consensus network needs at least two nodes");
  if (!(graph.damping > 0.0)) throw ValidationError("damping must be positive");
  if (!(graph.grounding > 0.0)) throw ValidationError("grounding must be positive");
  if (!(graph.jitter >= 0.0 && graph.jitter < 1.0)) {
    throw ValidationError("jitter must lie in [0, 1)");
  }
  if (graph.disturbance_node < 1 || graph.disturbance_node > nodes) {
    throw ValidationError("disturbance node " + std::to_string(graph.disturbance_node) +
                          " is outside 1.." + std::to_string(nodes));
  }
  for (const auto& e : graph.edges) {
    if (e.from < 1 || e.from > nodes || e.to < 1 || e.to > nodes || e.from == e.to) {
      throw ValidationError("edge (" + std::to_string(e.from) + ", " + std::to_string(e.to) +
                            ") is not between two distinct nodes in 1.." +
                            std::to_string(nodes));
    }
    if (!(e.weight > 0.0)) throw ValidationError("edge weights must be positive");
  }
  if (!connected(nodes, graph.edges)) {
    throw ValidationError("coupling graph is not connected");
  }

  Rng rng(graph.seed);
  auto perturb = [&](double value) {
    return value * (1.0 + graph.jitter * (2.0 * rng.uniform() - 1.0));
  };

  const auto n = static_cast<Eigen::Index>(nodes);
  Matrix laplacian = Matrix::Zero(n, n);
  for (const auto& e : graph.edges) {
    const double w = perturb(e.weight);
    const auto i = static_cast<Eigen::Index>(e.from - 1);
    const auto j = static_cast<Eigen::Index>(e.to - 1);
    laplacian(i, j) -= w;
    laplacian(j, i) -= w;
    laplacian(i, i) += w;
    laplacian(j, j) += w;
  }
  laplacian(0, 0) += graph.grounding;

  Matrix a = Matrix::Zero(2 * n, 2 * n);
  Matrix b = Matrix::Zero(2 * n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    a(2 * i, 2 * i + 1) = 1.0;
    for (Eigen::Index j = 0; j < n; ++j) a(2 * i + 1, 2 * j) = -laplacian(i, j);
    a(2 * i + 1, 2 * i + 1) = -perturb(graph.damping);
    b(2 * i + 1, i) = 1.0;
  }
  Vector d = Vector::Zero(2 * n);
  d(2 * static_cast<Eigen::Index>(graph.disturbance_node - 1) + 1) = 1.0;

  return LinearSystem(std::move(a), std::move(b), std::move(d),
                      build_consensus_q(ConsensusLayout::interleaved(nodes)),
                      Matrix::Identity(n, n), BlockLayout::uniform(nodes, 2, 1));
}

}  // namespace lqrgame
