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

#include <algorithm>
#include <cmath>
#include <optional>

#include <Eigen/LU>
#include <Eigen/QR>

#include "lqrgame/errors.hpp"
#include "lqrgame/game.hpp"

namespace lqrgame {

namespace {

using Index = Eigen::Index;

std::vector<Index> members(std::uint32_t set, Index n) {
  std::vector<Index> out;
  for (Index i = 0; i < n; ++i) {
    if (set & (1U << i)) out.push_back(i);
  }
  return out;
}

// Solves  pay(rows, cols) x = v 1,  sum x = 1  for x supported on cols.
std::optional<Vector> indifferent_mix(const Matrix& pay, const std::vector<Index>& rows,
                                      const std::vector<Index>& cols) {
  const auto eqs = static_cast<Index>(rows.size()) + 1;
  const auto unknowns = static_cast<Index>(cols.size()) + 1;
  Matrix lhs = Matrix::Zero(eqs, unknowns);
  Vector rhs = Vector::Zero(eqs);
  for (Index k = 0; k + 1 < eqs; ++k) {
    for (Index c = 0; c + 1 < unknowns; ++c) lhs(k, c) = pay(rows[k], cols[c]);
    lhs(k, unknowns - 1) = -1.0;
  }
  lhs.row(eqs - 1).head(unknowns - 1).setOnes();
  rhs(eqs - 1) = 1.0;

  Vector x;
  if (eqs == unknowns) {
    Eigen::FullPivLU<Matrix> lu(lhs);
    if (!lu.isInvertible()) return std::nullopt;
    x = lu.solve(rhs);
  } else {
    x = lhs.fullPivHouseholderQr().solve(rhs);
  }
  if (!x.allFinite() || (lhs * x - rhs).cwiseAbs().maxCoeff() > 1e-9 * (1.0 + lhs.cwiseAbs().maxCoeff())) {
    return std::nullopt;
  }
  Vector mix = Vector::Zero(pay.cols());
  for (Index c = 0; c + 1 < unknowns; ++c) {
    if (x(c) < -1e-10) return std::nullopt;
    mix(cols[static_cast<std::size_t>(c)]) = std::max(0.0, x(c));
  }
  const double total = mix.sum();
  if (!(total > 0.0)) return std::nullopt;
  return Vector(mix / total);
}

}  // namespace

std::vector<EquilibriumSolution> support_enumeration_oracle(const PayoffMatrices& u,
                                                            std::size_t max_actions) {
  const std::size_t actions = u.actions();
  if (actions > max_actions || actions > 16) {
    throw CapacityError("support enumeration is limited to " +
                        std::to_string(std::min<std::size_t>(max_actions, 16)) +
                        " actions per player, got " + std::to_string(actions));
  }
  const auto n = static_cast<Index>(actions);
  const Matrix a = u.U_a;
  const Matrix b = u.U_d;
  const Matrix bt = b.transpose();
  const double scale = u.scale();
  const double accept = 1e-9 * scale;
  // Unequal support sizes only matter in degenerate games; enumerating them
  // is affordable for small games only.
  const bool all_pairs = actions <= 8;

  std::vector<EquilibriumSolution> found;
  const std::uint32_t limit = 1U << n;
  for (std::uint32_t sr = 1; sr < limit; ++sr) {
    const auto rows = members(sr, n);
    for (std::uint32_t sd = 1; sd < limit; ++sd) {
      const auto cols = members(sd, n);
      if (!all_pairs && rows.size() != cols.size()) continue;
      const auto d = indifferent_mix(a, rows, cols);
      if (!d) continue;
      const auto r = indifferent_mix(bt, cols, rows);
      if (!r) continue;

      const Vector ad = a * *d;
      const Vector btr = bt * *r;
      const double f = r->dot(ad);
      const double g = btr.dot(*d);
      const double gap = std::max(ad.maxCoeff() - f, btr.maxCoeff() - g);
      if (gap > accept) continue;

      const bool duplicate = std::any_of(found.begin(), found.end(), [&](const auto& e) {
        double diff = 0.0;
        for (Index i = 0; i < n; ++i) {
          diff = std::max(diff, std::abs(e.r_star[static_cast<std::size_t>(i)] - (*r)(i)));
          diff = std::max(diff, std::abs(e.d_star[static_cast<std::size_t>(i)] - (*d)(i)));
        }
        return diff <= 1e-9;
      });
      if (duplicate) continue;

      EquilibriumSolution sol;
      sol.r_star = MixedStrategy(std::vector<double>(r->data(), r->data() + n));
      sol.d_star = MixedStrategy(std::vector<double>(d->data(), d->data() + n));
      sol.f_star = f;
      sol.g_star = g;
      sol.expected_loss = r->dot(Matrix(u.loss) * *d);
      double cost_a = 0.0;
      double cost_d = 0.0;
      for (Index i = 0; i < n; ++i) {
        cost_a += (*r)(i) * u.attacked[static_cast<std::size_t>(i)];
        cost_d += (*d)(i) * u.protected_[static_cast<std::size_t>(i)];
      }
      sol.expected_cost_attacker = u.gamma_a * cost_a;
      sol.expected_cost_defender = u.gamma_d * cost_d;
      sol.epsilon = std::max(0.0, gap);
      sol.objective = -std::max(0.0, ad.maxCoeff() - f) - std::max(0.0, btr.maxCoeff() - g);
      sol.payoff_scale = scale;
      found.push_back(std::move(sol));
    }
  }
  return found;
}

}  // namespace lqrgame
