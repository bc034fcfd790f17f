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
#include <bit>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "lqrgame/errors.hpp"
#include "lqrgame/game.hpp"
#include "lqrgame/kernels.hpp"

namespace lqrgame {

namespace {

std::span<const double> row_span(const RowMatrix& m) {
  return {m.data(), static_cast<std::size_t>(m.size())};
}

}  // namespace

double PayoffMatrices::scale() const {
  double s = 1.0;
  if (U_a.size() > 0) s = std::max(s, U_a.cwiseAbs().maxCoeff());
  if (U_d.size() > 0) s = std::max(s, U_d.cwiseAbs().maxCoeff());
  return s;
}

PayoffMatrices PayoffMatrices::from_bimatrix(RowMatrix attacker, RowMatrix defender) {
  if (attacker.rows() != defender.rows() || attacker.cols() != defender.cols() ||
      attacker.rows() == 0 || attacker.cols() == 0) {
    throw DimensionError("payoff matrices must be non-empty and of equal shape");
  }
  if (!attacker.allFinite() || !defender.allFinite()) {
    throw ValidationError("payoff entries must be finite");
  }
  PayoffMatrices u;
  u.loss = attacker;
  u.U_a = std::move(attacker);
  u.U_d = std::move(defender);
  u.attacked.assign(static_cast<std::size_t>(u.U_a.rows()), 0.0);
  u.protected_.assign(static_cast<std::size_t>(u.U_a.cols()), 0.0);
  return u;
}

PayoffMatrices build_payoffs(const LossTable& table, double gamma_a, double gamma_d) {
  if (!(gamma_a >= 0.0) || !(gamma_d >= 0.0) || !std::isfinite(gamma_a) ||
      !std::isfinite(gamma_d)) {
    throw ValidationError("unit costs gamma_a and gamma_d must be finite and >= 0");
  }
  const std::size_t count = table.size();
  const auto n_actions = static_cast<Eigen::Index>(count);
  PayoffMatrices u;
  u.gamma_a = gamma_a;
  u.gamma_d = gamma_d;
  u.U_a.resize(n_actions, n_actions);
  u.U_d.resize(n_actions, n_actions);
  u.loss.resize(n_actions, n_actions);
  u.attacked.resize(count);
  u.protected_.resize(count);
  const std::size_t n = table.nodes();
  for (std::size_t i = 0; i < count; ++i) {
    const auto ones = static_cast<double>(std::popcount(static_cast<std::uint64_t>(i)));
    u.attacked[i] = static_cast<double>(n) - ones;
    u.protected_[i] = ones;
  }
  for (std::size_t i = 0; i < count; ++i) {
    for (std::size_t j = 0; j < count; ++j) {
      // combine(a_i, p_j) is the bitwise OR of the indices.
      const double delta = table.delta(i | j);
      const auto ri = static_cast<Eigen::Index>(i);
      const auto cj = static_cast<Eigen::Index>(j);
      u.loss(ri, cj) = delta;
      u.U_a(ri, cj) = delta - gamma_a * u.attacked[i];
      u.U_d(ri, cj) = -delta - gamma_d * u.protected_[j];
    }
  }
  return u;
}

MixedStrategy::MixedStrategy(std::vector<double> probs) : probs_(std::move(probs)) {
  if (probs_.empty()) throw ValidationError("mixed strategy must be non-empty");
  double sum = 0.0;
  for (auto& p : probs_) {
    if (!std::isfinite(p) || p < -1e-12) {
      throw ValidationError("mixed strategy has a negative or non-finite entry");
    }
    p = std::max(p, 0.0);
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw ValidationError("mixed strategy sums to " + std::to_string(sum) + ", not 1");
  }
}

MixedStrategy MixedStrategy::pure(std::size_t size, std::size_t index) {
  std::vector<double> p(size, 0.0);
  p.at(index) = 1.0;
  return MixedStrategy(std::move(p));
}

MixedStrategy MixedStrategy::uniform(std::size_t size) {
  return MixedStrategy(std::vector<double>(size, 1.0 / static_cast<double>(size)));
}

ExpectedPayoffs expected_payoffs(const MixedStrategy& r, const MixedStrategy& d,
                                 const PayoffMatrices& u) {
  const std::size_t n = u.actions();
  if (r.size() != n || d.size() != n || static_cast<std::size_t>(u.U_a.cols()) != n) {
    throw DimensionError("strategy sizes do not match the payoff matrices");
  }
  std::vector<double> tmp(n);
  ExpectedPayoffs out;
  kernels::gemv(row_span(u.U_a), n, n, d.probs(), tmp);
  out.E_a = kernels::dot(r.probs(), tmp);
  kernels::gemv(row_span(u.U_d), n, n, d.probs(), tmp);
  out.E_d = kernels::dot(r.probs(), tmp);
  kernels::gemv(row_span(u.loss), n, n, d.probs(), tmp);
  out.E_loss = kernels::dot(r.probs(), tmp);
  out.E_cost_a = u.gamma_a * kernels::dot(r.probs(), u.attacked);
  out.E_cost_d = u.gamma_d * kernels::dot(d.probs(), u.protected_);
  return out;
}

ExpectedPayoffs expected_payoffs(const MixedStrategy& r, const MixedStrategy& d,
                                 const PayoffMatrices& u, const LossTable& table) {
  if (table.size() != u.actions()) {
    throw DimensionError("loss table size does not match the payoff matrices");
  }
  ExpectedPayoffs out = expected_payoffs(r, d, u);
  // E(Delta) straight from the table: sum_ij r_i d_j Delta_{a_i | p_j}.
  double loss = 0.0;
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (r[i] == 0.0) continue;
    double row = 0.0;
    for (std::size_t j = 0; j < d.size(); ++j) row += d[j] * table.delta(i | j);
    loss += r[i] * row;
  }
  out.E_loss = loss;
  return out;
}

std::vector<SupportEntry> dominant_support(const MixedStrategy& strategy, double threshold) {
  const std::size_t size = strategy.size();
  if (!std::has_single_bit(size) || size < 2) {
    throw DimensionError("strategy size must be a power of two of at least 2");
  }
  const auto n = static_cast<std::size_t>(std::countr_zero(size));
  std::vector<std::size_t> order(size);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return strategy[a] > strategy[b];
  });
  std::vector<SupportEntry> out;
  for (auto idx : order) {
    if (strategy[idx] < threshold) break;
    out.push_back({NodePattern::from_index(idx, n), strategy[idx]});
  }
  return out;
}

std::string support_digest(const std::vector<SupportEntry>& support) {
  std::string out;
  char buf[48];
  for (const auto& e : support) {
    if (!out.empty()) out += ';';
    std::snprintf(buf, sizeof buf, ":%.6f", e.probability);
    out += e.pattern.to_string();
    out += buf;
  }
  return out;
}

}  // namespace lqrgame
