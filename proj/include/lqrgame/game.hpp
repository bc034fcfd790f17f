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
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "lqrgame/lqr.hpp"
#include "lqrgame/pattern.hpp"
#include "lqrgame/structured.hpp"

namespace lqrgame {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// ---------------------------------------------------------------------------
// Loss table
// ---------------------------------------------------------------------------

enum class LossStatus { kExact, kUnstableCapped };

std::string to_string(LossStatus status);
LossStatus parse_loss_status(const std::string& text);

struct UnstablePolicy {
  enum class Kind { kCap, kError };
  Kind kind = Kind::kCap;
  // Absolute cap. When unset the cap is cap_multiplier times the largest
  // finite loss in the table.
  std::optional<double> cap_value;
  double cap_multiplier = 100.0;

  static UnstablePolicy parse(const std::string& text);  // "cap", "cap:<v>", "error"
  std::string to_string() const;
};

struct LossEntry {
  NodePattern pattern;
  double delta = 0.0;
  LossStatus status = LossStatus::kExact;
  // Diagnostics of the structured solve; not part of the persisted schema.
  double cost = 0.0;
  bool converged = true;
  int iterations = 0;
  std::string initializer;
};

class LossTable {
 public:
  LossTable() = default;
  LossTable(std::size_t nodes, double j_lqr, std::vector<LossEntry> entries,
            std::string system_hash = {});

  std::size_t nodes() const noexcept { return nodes_; }
  std::size_t size() const noexcept { return entries_.size(); }
  double j_lqr() const noexcept { return j_lqr_; }
  const std::string& system_hash() const noexcept { return system_hash_; }
  void set_system_hash(std::string hash) { system_hash_ = std::move(hash); }

  // Entries are stored by pattern index.
  const std::vector<LossEntry>& entries() const noexcept { return entries_; }
  const LossEntry& entry(std::uint64_t index) const { return entries_.at(index); }
  const LossEntry& entry(const NodePattern& s) const;
  double delta(std::uint64_t index) const { return entries_.at(index).delta; }
  double delta(const NodePattern& s) const { return entry(s).delta; }
  // Loss as a percentage of the unconstrained optimum.
  double fractional(std::uint64_t index) const;

 private:
  std::size_t nodes_ = 0;
  double j_lqr_ = 0.0;
  std::vector<LossEntry> entries_;
  std::string system_hash_;
};

struct LossTableOptions {
  bool self_links_disabled = true;
  UnstablePolicy unstable_policy;
  OptimizerOptions optimizer;
  unsigned threads = 1;
  std::size_t max_nodes = kDefaultMaxNodes;
};

// Delta_s = J(K*_s) - J(K*_lqr) for every pattern s. Patterns are solved in
// order of increasing popcount; each structured solve is also warm-started
// from the solutions of the patterns one bit below it, which keeps the table
// monotone even though each solve is only locally optimal.
LossTable build_loss_table(const LinearSystem& sys, const LossTableOptions& options);

// ---------------------------------------------------------------------------
// Payoffs and strategies
// ---------------------------------------------------------------------------

struct PayoffMatrices {
  RowMatrix U_a;   // attacker payoff, rows = attack patterns
  RowMatrix U_d;   // defender payoff, cols = protection patterns
  RowMatrix loss;  // Delta expanded to N x N through combine()
  double gamma_a = 0.0;
  double gamma_d = 0.0;
  std::vector<double> attacked;   // n_{a_i} per row
  std::vector<double> protected_; // n_{p_j} per column

  std::size_t actions() const noexcept { return static_cast<std::size_t>(U_a.rows()); }
  // max(1, max|U_a|, max|U_d|)
  double scale() const;

  // Wraps an arbitrary bimatrix game (no loss table behind it). The loss
  // matrix is taken to be U_a and the node counts are zero.
  static PayoffMatrices from_bimatrix(RowMatrix attacker, RowMatrix defender);
};

PayoffMatrices build_payoffs(const LossTable& table, double gamma_a, double gamma_d);

class MixedStrategy {
 public:
  MixedStrategy() = default;
  // Entries down to -1e-12 are clamped to zero; the sum must be 1 within 1e-9.
  explicit MixedStrategy(std::vector<double> probs);

  static MixedStrategy pure(std::size_t size, std::size_t index);
  static MixedStrategy uniform(std::size_t size);

  std::size_t size() const noexcept { return probs_.size(); }
  double operator[](std::size_t i) const { return probs_[i]; }
  const std::vector<double>& probs() const noexcept { return probs_; }

 private:
  std::vector<double> probs_;
};

struct ExpectedPayoffs {
  double E_a = 0.0;
  double E_d = 0.0;
  double E_loss = 0.0;
  double E_cost_a = 0.0;
  double E_cost_d = 0.0;
};

ExpectedPayoffs expected_payoffs(const MixedStrategy& r, const MixedStrategy& d,
                                 const PayoffMatrices& u, const LossTable& table);

// Same quantities using the loss matrix carried by the payoffs.
ExpectedPayoffs expected_payoffs(const MixedStrategy& r, const MixedStrategy& d,
                                 const PayoffMatrices& u);

// ---------------------------------------------------------------------------
// Equilibria
// ---------------------------------------------------------------------------

struct SolverOptions {
  int restarts = 20;
  // Accept when the best-response gap is at most eps_tol * payoff scale.
  double eps_tol = 1e-6;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  int max_outer = 40;
  int max_inner = 400;

  void validate() const;
};

struct EquilibriumSolution {
  MixedStrategy r_star;
  MixedStrategy d_star;
  double f_star = 0.0;
  double g_star = 0.0;
  double expected_loss = 0.0;
  double expected_cost_attacker = 0.0;
  double expected_cost_defender = 0.0;
  double epsilon = 0.0;
  double objective = 0.0;  // value of the bilinear program, <= 0
  double payoff_scale = 1.0;
  int restarts_used = 0;
};

// Largest gain any pure deviation offers either player against (r, d).
double best_response_gap(const PayoffMatrices& u, const MixedStrategy& r,
                         const MixedStrategy& d);

// Fills payoffs, expected quantities and the verified gap for (r, d).
EquilibriumSolution evaluate_strategies(const PayoffMatrices& u, MixedStrategy r,
                                        MixedStrategy d);

// Mixed-strategy Nash equilibrium via the bilinear program
//   max r'U_a d + r'U_d d - f - g  s.t.  U_a d <= f, U_d' r <= g, r, d in simplex
// solved by multi-start augmented-Lagrangian descent. Each local solution is
// polished on its identified supports and verified against the best-response
// conditions. Throws NonConvergenceError if no candidate passes.
EquilibriumSolution solve_msne(const PayoffMatrices& u, const SolverOptions& opts = {});

// All equilibria found by enumerating support pairs. Exponential; limited to
// max_actions actions per player.
std::vector<EquilibriumSolution> support_enumeration_oracle(const PayoffMatrices& u,
                                                            std::size_t max_actions = 16);

struct SupportEntry {
  NodePattern pattern;
  double probability = 0.0;
};

// Actions played with probability >= threshold, most likely first. The
// strategy size must be a power of two (one action per node pattern).
std::vector<SupportEntry> dominant_support(const MixedStrategy& strategy,
                                           double threshold = 0.03);

// "111:1.000000;110:0.250000" style digest.
std::string support_digest(const std::vector<SupportEntry>& support);

}  // namespace lqrgame
