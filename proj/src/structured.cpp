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

#include "lqrgame/structured.hpp"

#include <cmath>
#include <deque>
#include <limits>

#include "lqrgame/errors.hpp"

namespace lqrgame {

void OptimizerOptions::validate() const {
  if (!(grad_tol > 0.0)) throw ValidationError("grad_tol must be positive");
  if (max_iters <= 0) throw ValidationError("max_iters must be positive");
  if (!(armijo_c > 0.0)) throw ValidationError("armijo_c must be positive");
  if (!(backtrack_factor > 0.0 && backtrack_factor < 1.0)) {
    throw ValidationError("backtrack_factor must lie in (0, 1)");
  }
  if (!(min_step > 0.0)) throw ValidationError("min_step must be positive");
}

namespace {

struct Evaluation {
  CostGradient cg;
  // J computed a second way, tr((Q + K^T R K) L). The two agree to rounding
  // unless the closed loop is so stiff that the Lyapunov solves lose digits.
  double dual = 0.0;
};

Evaluation evaluate(const LinearSystem& sys, const Matrix& k) {
  if (k.rows() != sys.inputs() || k.cols() != sys.states()) {
    throw DimensionError("gain must be " + std::to_string(sys.inputs()) + "x" +
                         std::to_string(sys.states()));
  }
  const Matrix closed = sys.A() - sys.B() * k;
  const auto report = is_hurwitz(closed);
  if (!report.hurwitz) {
    throw InstabilityError("closed loop A - BK is not Hurwitz (spectral abscissa " +
                               std::to_string(report.abscissa) + ")",
                           report.abscissa);
  }
  const Matrix w = sys.Q() + k.transpose() * sys.R() * k;
  const Matrix p = solve_lyapunov(closed, w);
  const Matrix l = solve_lyapunov(closed.transpose(), sys.D() * sys.D().transpose());
  Evaluation out;
  out.cg.J = sys.D().dot(p * sys.D());
  out.cg.G = 2.0 * (sys.R() * k - sys.B().transpose() * p) * l;
  out.dual = (w.array() * l.array()).sum();
  return out;
}

bool reliable(const Evaluation& e) {
  return std::isfinite(e.cg.J) && std::abs(e.cg.J - e.dual) <= 1e-8 * (1.0 + std::abs(e.cg.J));
}

}  // namespace

CostGradient cost_and_gradient(const LinearSystem& sys, const Matrix& k) {
  return evaluate(sys, k).cg;
}

namespace {

bool stabilizes(const LinearSystem& sys, const Matrix& k) {
  return k.allFinite() && is_hurwitz(sys.A() - sys.B() * k).hurwitz;
}

double masked_inf_norm(const Matrix& g, const GainMask& mask) {
  double norm = 0.0;
  for (Eigen::Index j = 0; j < g.cols(); ++j) {
    for (Eigen::Index i = 0; i < g.rows(); ++i) {
      if (mask.is_free(i, j)) norm = std::max(norm, std::abs(g(i, j)));
    }
  }
  return norm;
}

// Some patterns have no minimizer: J keeps creeping down while the free gains
// grow without bound. Such runs stop once progress is flat.
constexpr int kStallSteps = 25;
constexpr double kStallTol = 1e-12;

// One descent run from a stabilizing, mask-conforming start. Directions come
// from L-BFGS restricted to the free entries (falling back to the projected
// gradient), and steps are backtracked until the Armijo condition holds;
// destabilizing or numerically unreliable trials count as failures.
StructuredSolution descend(const LinearSystem& sys, const GainMask& mask,
                           const OptimizerOptions& opt, Matrix k) {
  StructuredSolution sol;
  CostGradient cg = cost_and_gradient(sys, k);
  mask.project(cg.G);
  double gnorm = masked_inf_norm(cg.G, mask);

  // Limited-memory BFGS pairs (s, y) over the free entries.
  constexpr std::size_t kMemory = 8;
  std::deque<std::pair<Matrix, Matrix>> pairs;
  int iter = 0;
  int flat = 0;  // consecutive accepted steps with negligible improvement
  bool converged = gnorm <= opt.grad_tol * (1.0 + cg.J);
  while (!converged && iter < opt.max_iters && flat < kStallSteps) {
    Matrix dir = -cg.G;
    std::vector<double> alpha(pairs.size());
    for (std::size_t i = pairs.size(); i-- > 0;) {
      const auto& [s, y] = pairs[i];
      alpha[i] = (s.array() * dir.array()).sum() / (s.array() * y.array()).sum();
      dir -= alpha[i] * y;
    }
    if (!pairs.empty()) {
      const auto& [s, y] = pairs.back();
      dir *= (s.array() * y.array()).sum() / y.squaredNorm();
    }
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      const auto& [s, y] = pairs[i];
      const double beta = (y.array() * dir.array()).sum() / (s.array() * y.array()).sum();
      dir += (alpha[i] - beta) * s;
    }
    mask.project(dir);
    double slope = (dir.array() * cg.G.array()).sum();
    if (!(slope < 0.0)) {
      pairs.clear();
      dir = -cg.G;
      slope = -cg.G.squaredNorm();
    }
    double step = pairs.empty() ? 1.0 / std::sqrt(-slope) : 1.0;

    bool accepted = false;
    Matrix trial;
    CostGradient trial_cg;
    while (step >= opt.min_step) {
      trial = k + step * dir;
      if (stabilizes(sys, trial)) {
        const Evaluation ev = evaluate(sys, trial);
        trial_cg = ev.cg;
        if (reliable(ev) && trial_cg.J <= cg.J + opt.armijo_c * step * slope) {
          accepted = true;
          break;
        }
      }
      step *= opt.backtrack_factor;
    }
    if (!accepted) {
      if (pairs.empty()) break;
      pairs.clear();  // retry along the steepest-descent direction
      continue;
    }

    mask.project(trial_cg.G);
    Matrix s = trial - k;
    Matrix y = trial_cg.G - cg.G;
    if ((s.array() * y.array()).sum() > 1e-12 * s.norm() * y.norm()) {
      pairs.emplace_back(std::move(s), std::move(y));
      if (pairs.size() > kMemory) pairs.pop_front();
    }
    flat = cg.J - trial_cg.J <= kStallTol * (1.0 + cg.J) ? flat + 1 : 0;
    k = std::move(trial);
    cg = std::move(trial_cg);
    gnorm = masked_inf_norm(cg.G, mask);
    ++iter;
    converged = gnorm <= opt.grad_tol * (1.0 + cg.J);
  }

  sol.K_star = std::move(k);
  sol.J_star = cg.J;
  sol.iterations = iter;
  sol.converged = converged;
  sol.final_grad_norm = gnorm;
  return sol;
}

}  // namespace

std::vector<InitialGain> stabilizing_initializers(const LinearSystem& sys,
                                                  const GainMask& mask) {
  if (mask.rows() != sys.inputs() || mask.cols() != sys.states()) {
    throw DimensionError("mask dimensions do not match the system");
  }
  std::vector<InitialGain> out;
  auto try_gain = [&](Matrix k, std::string source) {
    mask.project(k);
    if (stabilizes(sys, k)) out.push_back({std::move(k), std::move(source)});
  };

  try_gain(solve_riccati(sys).K, "lqr");
  for (int power = 1; power <= 4; ++power) {
    const double scale = std::pow(10.0, power);
    try {
      auto heavy = solve_riccati(sys.A(), sys.B(), scale * sys.Q(), sys.R());
      try_gain(std::move(heavy.K), "lqr-q1e" + std::to_string(power));
    } catch (const Error&) {
      // Scaled problem failed to solve; skip this rung.
    }
  }
  if (is_hurwitz(sys.A()).hurwitz) {
    out.push_back({Matrix::Zero(sys.inputs(), sys.states()), "zero"});
  }
  return out;
}

std::optional<Matrix> find_stabilizing_structured_gain(const LinearSystem& sys,
                                                       const GainMask& mask) {
  auto ladder = stabilizing_initializers(sys, mask);
  if (ladder.empty()) return std::nullopt;
  return std::move(ladder.front().K);
}

StructuredSolution optimize_structured(const StructuredProblem& problem) {
  problem.options.validate();
  const LinearSystem& sys = problem.system;
  const GainMask& mask = problem.mask;

  auto starts = stabilizing_initializers(sys, mask);
  for (std::size_t w = 0; w < problem.warm_starts.size(); ++w) {
    Matrix k = problem.warm_starts[w];
    if (k.rows() != sys.inputs() || k.cols() != sys.states()) {
      throw DimensionError("warm-start gain has the wrong shape");
    }
    mask.project(k);
    if (stabilizes(sys, k)) starts.push_back({std::move(k), "warm-" + std::to_string(w)});
  }
  if (starts.empty()) {
    throw StabilizabilityError("no stabilizing gain conforms to the sparsity mask");
  }

  if (mask.free_count() == 0) {
    StructuredSolution sol;
    sol.K_star = Matrix::Zero(sys.inputs(), sys.states());
    sol.J_star = evaluate_cost(sys, sol.K_star);
    sol.converged = true;
    sol.initializer = "zero";
    return sol;
  }

  std::optional<StructuredSolution> best;
  for (auto& start : starts) {
    StructuredSolution sol = descend(sys, mask, problem.options, std::move(start.K));
    sol.initializer = start.source;
    if (!best || sol.J_star < best->J_star) best = std::move(sol);
  }
  return std::move(*best);
}

}  // namespace lqrgame
