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

#include <optional>
#include <string>
#include <vector>

#include "lqrgame/lqr.hpp"
#include "lqrgame/pattern.hpp"

namespace lqrgame {

struct OptimizerOptions {
  double grad_tol = 1e-6;  // on the masked gradient inf-norm, relative to 1 + J
  int max_iters = 5000;
  double armijo_c = 1e-4;
  double backtrack_factor = 0.5;
  double min_step = 1e-14;

  // Throws ValidationError unless every field is positive and the backtrack
  // factor lies in (0, 1).
  void validate() const;
};

struct StructuredProblem {
  LinearSystem system;
  GainMask mask;
  OptimizerOptions options;
  // Extra starting gains tried after the standard ladder. Each is projected
  // onto the mask and skipped if the projection does not stabilize.
  std::vector<Matrix> warm_starts;
};

struct StructuredSolution {
  Matrix K_star;
  double J_star = 0.0;
  int iterations = 0;
  bool converged = false;
  double final_grad_norm = 0.0;
  std::string initializer;  // which starting gain produced the reported solution
};

struct CostGradient {
  double J = 0.0;
  Matrix G;  // dJ/dK, r x m
};

// J(K) together with its gradient 2 (R K - B^T P_K) L_K, where P_K and L_K
// are the closed-loop observability and controllability Gramians.
CostGradient cost_and_gradient(const LinearSystem& sys, const Matrix& k);

struct InitialGain {
  Matrix K;
  std::string source;
};

// Every rung of the initialization ladder that yields a stabilizing gain
// conforming to the mask, in ladder order: masked K_lqr, masked LQR gains for
// Q scaled by 10..10^4, and K = 0 when A is Hurwitz.
std::vector<InitialGain> stabilizing_initializers(const LinearSystem& sys,
                                                  const GainMask& mask);

// First successful rung of the ladder, or nothing.
std::optional<Matrix> find_stabilizing_structured_gain(const LinearSystem& sys,
                                                       const GainMask& mask);

// Projected gradient descent with Armijo backtracking, started from every
// stabilizing initializer. Returns the best local solution. Throws
// StabilizabilityError when no starting gain stabilizes under the mask.
StructuredSolution optimize_structured(const StructuredProblem& problem);

}  // namespace lqrgame
