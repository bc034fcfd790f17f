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

#include <cstddef>
#include <cstdint>
#include <vector>

#include "lqrgame/lqr.hpp"

namespace lqrgame {

// k I - 1 1^T. Its quadratic form is the sum of squared pairwise differences.
Matrix consensus_laplacian(std::size_t k);

// Describes where the angle, frequency and remaining states live in the
// system's native state vector. permutation[p] is the native index of the
// p-th entry of the stacked vector [angles; frequencies; remaining].
struct ConsensusLayout {
  std::size_t n_angles = 0;
  std::size_t n_freqs = 0;
  std::size_t n_rem = 0;
  std::vector<std::size_t> permutation;

  std::size_t total() const noexcept { return n_angles + n_freqs + n_rem; }

  // Stacked ordering equals the native ordering.
  static ConsensusLayout identity(std::size_t n_angles, std::size_t n_rem = 0);
  // Native ordering [delta_1, omega_1, delta_2, omega_2, ...].
  static ConsensusLayout interleaved(std::size_t nodes);
};

// blockdiag(L, L, I) in stacked order, permuted into native order.
Matrix build_consensus_q(const ConsensusLayout& layout);

struct Edge {
  std::size_t from = 0;  // 1-based node ids
  std::size_t to = 0;
  double weight = 1.0;
};

struct GraphSpec {
  std::vector<Edge> edges;
  double damping = 1.0;
  std::size_t disturbance_node = 1;  // 1-based
  std::uint64_t seed = 0;
  // Restoring term on node 1's angle; removes the zero mode of the Laplacian.
  double grounding = 1.0;
  // Relative spread of the seeded perturbation of weights and damping.
  double jitter = 0.2;
};

GraphSpec ring_graph(std::size_t nodes, double weight = 1.0);
GraphSpec line_graph(std::size_t nodes, double weight = 1.0);
GraphSpec complete_graph(std::size_t nodes, double weight = 1.0);

// Second-order oscillator network, one (angle, frequency) pair and one input
// per node:
//   delta_i' = omega_i
//   omega_i' = -sum_j w_ij (delta_i - delta_j) - g_i delta_i - d_i omega_i + u_i + D_i w
// with R = I, the consensus Q and the disturbance entering node
// `disturbance_node`'s acceleration equation.
LinearSystem build_synthetic_network(std::size_t nodes, const GraphSpec& graph);

}  // namespace lqrgame
