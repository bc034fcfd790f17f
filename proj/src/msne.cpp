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
#include <limits>
#include <numeric>
#include <optional>
#include <span>

#include <Eigen/QR>

#include "lqrgame/errors.hpp"
#include "lqrgame/game.hpp"
#include "lqrgame/kernels.hpp"
#include "lqrgame/parallel.hpp"
#include "lqrgame/rng.hpp"

namespace lqrgame {

void SolverOptions::validate() const {
  if (restarts < 1) throw ValidationError("restarts must be at least 1");
  if (!(eps_tol > 0.0)) throw ValidationError("eps_tol must be positive");
  if (max_outer < 1 || max_inner < 1) throw ValidationError("iteration limits must be positive");
}

namespace {

using Vec = std::vector<double>;

std::span<const double> flat(const RowMatrix& m) {
  return {m.data(), static_cast<std::size_t>(m.size())};
}

double max_of(const Vec& v) { return *std::max_element(v.begin(), v.end()); }

// Euclidean projection onto the probability simplex.
void project_simplex(std::span<double> v) {
  Vec sorted(v.begin(), v.end());
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  double cumulative = 0.0;
  double theta = 0.0;
  for (std::size_t k = 0; k < sorted.size(); ++k) {
    cumulative += sorted[k];
    const double t = (cumulative - 1.0) / static_cast<double>(k + 1);
    if (sorted[k] - t > 0.0) theta = t;
  }
  for (auto& x : v) x = std::max(x - theta, 0.0);
}

// Payoffs divided by the payoff scale, plus the transposes and sum the solver
// needs.
struct ScaledGame {
  std::size_t n = 0;
  double scale = 1.0;
  RowMatrix a, b, sum, bt;

  explicit ScaledGame(const PayoffMatrices& u)
      : n(u.actions()),
        scale(u.scale()),
        a(u.U_a / u.scale()),
        b(u.U_d / u.scale()),
        sum(a + b),
        bt(b.transpose()) {}

  Vec a_times(const Vec& d) const {
    Vec out(n);
    kernels::gemv(flat(a), n, n, d, out);
    return out;
  }
  Vec bt_times(const Vec& r) const {
    Vec out(n);
    kernels::gemv_t(flat(b), n, n, r, out);
    return out;
  }

  // max of the two best-response gaps, in scaled units.
  double gap(const Vec& r, const Vec& d) const {
    const Vec ad = a_times(d);
    const Vec btr = bt_times(r);
    const double fa = kernels::dot(r, ad);
    const double gd = kernels::dot(btr, d);
    return std::max(max_of(ad) - fa, max_of(btr) - gd);
  }
};

// Augmented Lagrangian (Powell-Hestenes-Rockafellar) for the bilinear program
// written as a minimization:
//   min  -r'(A+B)d + f + g   s.t.  A d - f <= 0,  B' r - g <= 0,  r, d in simplex.
class LocalSolver {
 public:
  LocalSolver(const ScaledGame& game, const SolverOptions& opts)
      : game_(game), opts_(opts), n_(game.n) {}

  std::pair<Vec, Vec> run(Vec r, Vec d) {
    const std::size_t n = n_;
    Vec z(2 * n + 2);
    std::copy(r.begin(), r.end(), z.begin());
    std::copy(d.begin(), d.end(), z.begin() + static_cast<std::ptrdiff_t>(n));
    z[2 * n] = max_of(game_.a_times(d));
    z[2 * n + 1] = max_of(game_.bt_times(r));
    lambda_.assign(n, 0.0);
    mu_.assign(n, 0.0);
    rho_ = 10.0;

    double previous_violation = std::numeric_limits<double>::infinity();
    for (int outer = 0; outer < opts_.max_outer; ++outer) {
      const bool inner_done = minimize(z);
      Eval ev = evaluate(z);
      lambda_ = ev.alpha;
      mu_ = ev.beta;
      const double violation = ev.violation;
      if (violation <= 1e-10 && inner_done) break;
      if (violation > 0.25 * previous_violation) rho_ = std::min(rho_ * 10.0, 1e8);
      previous_violation = violation;
    }
    Vec r_out(z.begin(), z.begin() + static_cast<std::ptrdiff_t>(n));
    Vec d_out(z.begin() + static_cast<std::ptrdiff_t>(n),
              z.begin() + static_cast<std::ptrdiff_t>(2 * n));
    project_simplex(r_out);
    project_simplex(d_out);
    return {std::move(r_out), std::move(d_out)};
  }

 private:
  struct Eval {
    double value = 0.0;
    Vec grad;
    Vec alpha, beta;
    double violation = 0.0;
  };

  Eval evaluate(const Vec& z) const {
    const std::size_t n = n_;
    std::span<const double> r(z.data(), n);
    std::span<const double> d(z.data() + n, n);
    const double f = z[2 * n];
    const double g = z[2 * n + 1];

    Eval ev;
    ev.alpha.resize(n);
    ev.beta.resize(n);
    ev.grad.assign(2 * n + 2, 0.0);
    Vec ad(n), btr(n), sd(n);
    kernels::gemv(flat(game_.a), n, n, d, ad);
    kernels::gemv_t(flat(game_.b), n, n, r, btr);
    kernels::gemv(flat(game_.sum), n, n, d, sd);

    double penalty = 0.0;
    double violation = 0.0;
    double alpha_sum = 0.0;
    double beta_sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double c = ad[i] - f;
      ev.alpha[i] = std::max(0.0, lambda_[i] + rho_ * c);
      penalty += ev.alpha[i] * ev.alpha[i] - lambda_[i] * lambda_[i];
      alpha_sum += ev.alpha[i];
      violation = std::max(violation, c);
    }
    for (std::size_t j = 0; j < n; ++j) {
      const double e = btr[j] - g;
      ev.beta[j] = std::max(0.0, mu_[j] + rho_ * e);
      penalty += ev.beta[j] * ev.beta[j] - mu_[j] * mu_[j];
      beta_sum += ev.beta[j];
      violation = std::max(violation, e);
    }
    ev.value = -kernels::dot(r, sd) + f + g + penalty / (2.0 * rho_);
    ev.violation = violation;

    // d/dr = -(A+B) d + B beta ; d/dd = -(A+B)' r + A' alpha
    std::span<double> gr(ev.grad.data(), n);
    std::span<double> gd(ev.grad.data() + n, n);
    Vec tmp(n);
    kernels::gemv(flat(game_.b), n, n, ev.beta, tmp);
    for (std::size_t i = 0; i < n; ++i) gr[i] = tmp[i] - sd[i];
    kernels::gemv_t(flat(game_.sum), n, n, r, tmp);
    Vec tmp2(n);
    kernels::gemv_t(flat(game_.a), n, n, ev.alpha, tmp2);
    for (std::size_t j = 0; j < n; ++j) gd[j] = tmp2[j] - tmp[j];
    ev.grad[2 * n] = 1.0 - alpha_sum;
    ev.grad[2 * n + 1] = 1.0 - beta_sum;
    return ev;
  }

  void project(Vec& z) const {
    project_simplex(std::span<double>(z.data(), n_));
    project_simplex(std::span<double>(z.data() + n_, n_));
  }

  // Projected gradient with Barzilai-Borwein trial steps and Armijo
  // backtracking. Returns true when the projected-gradient step is tiny.
  bool minimize(Vec& z) const {
    Eval ev = evaluate(z);
    Vec prev_z, prev_grad;
    double step = 1.0;
    for (int iter = 0; iter < opts_.max_inner; ++iter) {
      Vec probe = z;
      for (std::size_t k = 0; k < z.size(); ++k) probe[k] -= ev.grad[k];
      project(probe);
      double stationarity = 0.0;
      for (std::size_t k = 0; k < z.size(); ++k) {
        stationarity = std::max(stationarity, std::abs(probe[k] - z[k]));
      }
      if (stationarity <= 1e-12) return true;

      if (!prev_z.empty()) {
        double ss = 0.0;
        double sy = 0.0;
        for (std::size_t k = 0; k < z.size(); ++k) {
          const double s = z[k] - prev_z[k];
          const double y = ev.grad[k] - prev_grad[k];
          ss += s * s;
          sy += s * y;
        }
        step = sy > 0.0 ? std::clamp(ss / sy, 1e-12, 1e12) : std::min(step * 4.0, 1e12);
      }

      bool accepted = false;
      Vec trial(z.size());
      Eval trial_ev;
      while (step > 1e-16) {
        for (std::size_t k = 0; k < z.size(); ++k) trial[k] = z[k] - step * ev.grad[k];
        project(trial);
        double decrease = 0.0;
        for (std::size_t k = 0; k < z.size(); ++k) decrease += ev.grad[k] * (trial[k] - z[k]);
        trial_ev = evaluate(trial);
        if (trial_ev.value <= ev.value + 1e-4 * decrease) {
          accepted = true;
          break;
        }
        step *= 0.5;
      }
      if (!accepted) return true;
      prev_z = std::move(z);
      prev_grad = std::move(ev.grad);
      z = std::move(trial);
      ev = std::move(trial_ev);
    }
    return false;
  }

  const ScaledGame& game_;
  const SolverOptions& opts_;
  std::size_t n_;
  Vec lambda_, mu_;
  double rho_ = 10.0;
};

// Mixed strategy over `support` making every row in `indifferent` earn the
// same payoff under `pay` (rows x cols). Returns nothing when the linear
// system is inconsistent or the solution leaves the simplex.
std::optional<Vec> indifference_mix(const RowMatrix& pay,
                                    const std::vector<std::size_t>& indifferent,
                                    const std::vector<std::size_t>& support) {
  const auto rows = static_cast<Eigen::Index>(indifferent.size() + 1);
  const auto cols = static_cast<Eigen::Index>(support.size() + 1);
  Matrix system = Matrix::Zero(rows, cols);
  Vector rhs = Vector::Zero(rows);
  for (Eigen::Index k = 0; k + 1 < rows; ++k) {
    for (Eigen::Index c = 0; c + 1 < cols; ++c) {
      system(k, c) = pay(static_cast<Eigen::Index>(indifferent[static_cast<std::size_t>(k)]),
                         static_cast<Eigen::Index>(support[static_cast<std::size_t>(c)]));
    }
    system(k, cols - 1) = -1.0;
  }
  system.row(rows - 1).head(cols - 1).setOnes();
  rhs(rows - 1) = 1.0;

  const Vector x = system.completeOrthogonalDecomposition().solve(rhs);
  if (!x.allFinite() || (system * x - rhs).lpNorm<Eigen::Infinity>() > 1e-9) {
    return std::nullopt;
  }
  Vec mix(static_cast<std::size_t>(pay.cols()), 0.0);
  double total = 0.0;
  for (Eigen::Index c = 0; c + 1 < cols; ++c) {
    if (x(c) < -1e-9) return std::nullopt;
    const double p = std::max(0.0, x(c));
    mix[support[static_cast<std::size_t>(c)]] = p;
    total += p;
  }
  if (!(total > 0.0)) return std::nullopt;
  for (auto& p : mix) p /= total;
  return mix;
}

// Lawson-Hanson nonnegative least squares: min |M x - b| subject to x >= 0.
Vector nnls(const Matrix& m, const Vector& b) {
  const Eigen::Index cols = m.cols();
  Vector x = Vector::Zero(cols);
  std::vector<bool> passive(static_cast<std::size_t>(cols), false);
  auto passive_solve = [&] {
    std::vector<Eigen::Index> idx;
    for (Eigen::Index j = 0; j < cols; ++j) {
      if (passive[static_cast<std::size_t>(j)]) idx.push_back(j);
    }
    Matrix sub(m.rows(), static_cast<Eigen::Index>(idx.size()));
    for (std::size_t k = 0; k < idx.size(); ++k) sub.col(static_cast<Eigen::Index>(k)) = m.col(idx[k]);
    const Vector zs = sub.completeOrthogonalDecomposition().solve(b);
    Vector z = Vector::Zero(cols);
    for (std::size_t k = 0; k < idx.size(); ++k) z(idx[k]) = zs(static_cast<Eigen::Index>(k));
    return z;
  };
  const double tol = 1e-13 * (1.0 + m.lpNorm<Eigen::Infinity>());
  for (Eigen::Index outer = 0; outer < 3 * cols + 10; ++outer) {
    const Vector w = m.transpose() * (b - m * x);
    Eigen::Index pick = -1;
    for (Eigen::Index j = 0; j < cols; ++j) {
      if (!passive[static_cast<std::size_t>(j)] && w(j) > tol && (pick < 0 || w(j) > w(pick))) {
        pick = j;
      }
    }
    if (pick < 0) break;
    passive[static_cast<std::size_t>(pick)] = true;
    for (Eigen::Index inner = 0; inner <= cols; ++inner) {
      const Vector z = passive_solve();
      double alpha = 1.0;
      bool clipped = false;
      for (Eigen::Index j = 0; j < cols; ++j) {
        if (passive[static_cast<std::size_t>(j)] && z(j) <= 0.0) {
          alpha = std::min(alpha, x(j) / (x(j) - z(j)));
          clipped = true;
        }
      }
      if (!clipped) {
        x = z;
        break;
      }
      x += alpha * (z - x);
      for (Eigen::Index j = 0; j < cols; ++j) {
        if (passive[static_cast<std::size_t>(j)] && x(j) <= 1e-15) {
          passive[static_cast<std::size_t>(j)] = false;
          x(j) = 0.0;
        }
      }
    }
  }
  return x;
}

// Mixed strategy over `support` under which every row in `tight` earns the
// maximum payoff of `pay`, found as a feasibility problem with slack
// variables for the remaining rows. Handles degenerate games where the
// square indifference system is singular or its solution leaves the simplex.
std::optional<Vec> best_reply_mix(const RowMatrix& pay, const std::vector<std::size_t>& tight,
                                  const std::vector<std::size_t>& support) {
  const auto rows = pay.rows();
  // Shift so the value is at least 1 and needs no sign split.
  const double shift = 1.0 - pay.minCoeff();
  std::vector<bool> is_tight(static_cast<std::size_t>(rows), false);
  for (auto i : tight) is_tight[i] = true;
  const auto slack_count =
      static_cast<Eigen::Index>(rows) - static_cast<Eigen::Index>(tight.size());
  const auto k = static_cast<Eigen::Index>(support.size());
  Matrix m = Matrix::Zero(rows + 1, k + slack_count + 1);
  Vector rhs = Vector::Zero(rows + 1);
  Eigen::Index slack = k;
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index c = 0; c < k; ++c) {
      m(i, c) = pay(i, static_cast<Eigen::Index>(support[static_cast<std::size_t>(c)])) + shift;
    }
    if (!is_tight[static_cast<std::size_t>(i)]) m(i, slack++) = 1.0;
    m(i, k + slack_count) = -1.0;
  }
  m.row(rows).head(k).setOnes();
  rhs(rows) = 1.0;
  const Vector x = nnls(m, rhs);
  if ((m * x - rhs).lpNorm<Eigen::Infinity>() > 1e-11) return std::nullopt;
  Vec mix(static_cast<std::size_t>(pay.cols()), 0.0);
  double total = 0.0;
  for (Eigen::Index c = 0; c < k; ++c) {
    mix[support[static_cast<std::size_t>(c)]] = x(c);
    total += x(c);
  }
  if (!(total > 0.0)) return std::nullopt;
  for (auto& p : mix) p /= total;
  return mix;
}

std::vector<std::size_t> above(const Vec& v, double threshold) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] > threshold) out.push_back(i);
  }
  return out;
}

std::vector<std::size_t> near_max(const Vec& v, double tol) {
  const double top = max_of(v);
  return above(v, top - tol - 1e-300);
}

struct Candidate {
  Vec r, d;
  double gap = std::numeric_limits<double>::infinity();  // scaled units
};

// Snaps an approximate equilibrium onto exact indifference conditions over
// its apparent supports. Returns the best of the input and its polished
// variants.
Candidate polish(const ScaledGame& game, Candidate start) {
  Candidate best = std::move(start);
  best.gap = game.gap(best.r, best.d);

  std::vector<std::pair<std::vector<std::size_t>, std::vector<std::size_t>>> tried;
  auto attempt = [&](const std::vector<std::size_t>& rows_for_d,
                     const std::vector<std::size_t>& support_r,
                     const std::vector<std::size_t>& cols_for_r,
                     const std::vector<std::size_t>& support_d) {
    if (support_r.empty() || support_d.empty()) return;
    auto d = indifference_mix(game.a, rows_for_d, support_d);
    if (!d) return;
    auto r = indifference_mix(game.bt, cols_for_r, support_r);
    if (!r) return;
    Candidate c{std::move(*r), std::move(*d)};
    c.gap = game.gap(c.r, c.d);
    if (c.gap < best.gap) best = std::move(c);
  };

  // Supports read off the near-best replies; each pair decouples into two
  // feasibility problems whose solutions form an exact equilibrium.
  for (double tol : {1e-10, 1e-7, 1e-5, 1e-4, 1e-3, 1e-2}) {
    if (best.gap <= 1e-15) break;
    const auto rows = near_max(game.a_times(best.d), tol);
    const auto cols = near_max(game.bt_times(best.r), tol);
    auto d = best_reply_mix(game.a, rows, cols);
    if (!d) continue;
    auto r = best_reply_mix(game.bt, cols, rows);
    if (!r) continue;
    Candidate c{std::move(*r), std::move(*d)};
    c.gap = game.gap(c.r, c.d);
    if (c.gap < best.gap) best = std::move(c);
  }

  for (double threshold : {1e-2, 1e-4, 1e-6, 1e-8}) {
    auto sr = above(best.r, threshold);
    auto sd = above(best.d, threshold);
    if (std::find(tried.begin(), tried.end(), std::make_pair(sr, sd)) != tried.end()) continue;
    tried.emplace_back(sr, sd);
    attempt(sr, sr, sd, sd);
    for (double tol : {1e-8, 1e-5}) {
      attempt(near_max(game.a_times(best.d), tol), sr, near_max(game.bt_times(best.r), tol),
              sd);
    }
  }
  return best;
}

std::size_t support_size(const Vec& v) {
  return static_cast<std::size_t>(std::count_if(v.begin(), v.end(), [](double p) {
    return p > 1e-12;
  }));
}

// Ranking used to pick one equilibrium among many: verified first, then the
// largest program value, the smallest attacker payoff, the sparsest supports,
// and finally the largest expected number of attacked plus protected nodes.
struct Ranked {
  EquilibriumSolution sol;
  bool verified = false;
  std::size_t support = 0;
  double resources = 0.0;
};

bool better(const Ranked& x, const Ranked& y, double tol) {
  if (x.verified != y.verified) return x.verified;
  if (!x.verified) return x.sol.epsilon < y.sol.epsilon;
  if (std::abs(x.sol.objective - y.sol.objective) > tol) {
    return x.sol.objective > y.sol.objective;
  }
  if (std::abs(x.sol.f_star - y.sol.f_star) > tol) return x.sol.f_star < y.sol.f_star;
  if (x.support != y.support) return x.support < y.support;
  if (std::abs(x.resources - y.resources) > 1e-9) return x.resources > y.resources;
  return x.sol.epsilon < y.sol.epsilon;
}

Ranked rank(const PayoffMatrices& u, const Vec& r, const Vec& d, double tol) {
  Ranked out;
  out.sol = evaluate_strategies(u, MixedStrategy(r), MixedStrategy(d));
  out.verified = out.sol.epsilon <= tol;
  out.support = support_size(r) + support_size(d);
  out.resources = kernels::dot(r, u.attacked) + kernels::dot(d, u.protected_);
  return out;
}

std::pair<Vec, Vec> restart_point(const ScaledGame& game, int index, std::uint64_t seed) {
  const std::size_t n = game.n;
  const Vec uniform(n, 1.0 / static_cast<double>(n));
  auto pure = [n](std::size_t i) {
    Vec v(n, 0.0);
    v[i] = 1.0;
    return v;
  };
  auto argmax = [](const Vec& v) {
    return static_cast<std::size_t>(std::max_element(v.begin(), v.end()) - v.begin());
  };
  switch (index) {
    case 0:
      return {uniform, uniform};
    case 1:
      return {pure(argmax(game.a_times(uniform))), pure(argmax(game.bt_times(uniform)))};
    case 2:
      return {pure(argmax(game.a_times(uniform))), uniform};
    case 3:
      return {uniform, pure(argmax(game.bt_times(uniform)))};
    default:
      break;
  }
  Rng rng(seed * 0x9E3779B97F4A7C15ULL + static_cast<std::uint64_t>(index));
  auto dirichlet = [&] {
    Vec v(n);
    double total = 0.0;
    for (auto& x : v) total += (x = rng.exponential());
    for (auto& x : v) x /= total;
    return v;
  };
  Vec r = dirichlet();
  Vec d = dirichlet();
  return {std::move(r), std::move(d)};
}

}  // namespace

double best_response_gap(const PayoffMatrices& u, const MixedStrategy& r,
                         const MixedStrategy& d) {
  const std::size_t n = u.actions();
  if (r.size() != n || d.size() != n) throw DimensionError("strategy size mismatch");
  Vec ad(n), btr(n);
  kernels::gemv(flat(u.U_a), n, n, d.probs(), ad);
  kernels::gemv_t(flat(u.U_d), n, n, r.probs(), btr);
  const double f = kernels::dot(r.probs(), ad);
  const double g = kernels::dot(btr, d.probs());
  return std::max(0.0, std::max(max_of(ad) - f, max_of(btr) - g));
}

EquilibriumSolution evaluate_strategies(const PayoffMatrices& u, MixedStrategy r,
                                        MixedStrategy d) {
  const std::size_t n = u.actions();
  if (r.size() != n || d.size() != n) throw DimensionError("strategy size mismatch");
  Vec ad(n), btr(n);
  kernels::gemv(flat(u.U_a), n, n, d.probs(), ad);
  kernels::gemv_t(flat(u.U_d), n, n, r.probs(), btr);
  const ExpectedPayoffs e = expected_payoffs(r, d, u);

  EquilibriumSolution sol;
  sol.f_star = e.E_a;
  sol.g_star = e.E_d;
  sol.expected_loss = e.E_loss;
  sol.expected_cost_attacker = e.E_cost_a;
  sol.expected_cost_defender = e.E_cost_d;
  const double gap_a = max_of(ad) - e.E_a;
  const double gap_d = max_of(btr) - e.E_d;
  sol.epsilon = std::max(0.0, std::max(gap_a, gap_d));
  sol.objective = -(std::max(0.0, gap_a) + std::max(0.0, gap_d));
  sol.payoff_scale = u.scale();
  sol.r_star = std::move(r);
  sol.d_star = std::move(d);
  return sol;
}

EquilibriumSolution solve_msne(const PayoffMatrices& u, const SolverOptions& opts) {
  opts.validate();
  const std::size_t n = u.actions();
  if (n == 0 || static_cast<std::size_t>(u.U_a.cols()) != n || u.U_d.rows() != u.U_a.rows() ||
      u.U_d.cols() != u.U_a.cols()) {
    throw DimensionError("payoff matrices must be square and of equal size");
  }
  if (!u.U_a.allFinite() || !u.U_d.allFinite()) {
    throw ValidationError("payoff matrices contain non-finite entries");
  }

  const ScaledGame game(u);
  const double tol = opts.eps_tol * game.scale;

  // Pure pairs that already satisfy the best-response conditions are exact
  // maximizers of the program; keep the best-ranked one.
  std::optional<Ranked> best;
  {
    Vec col_max(n, -std::numeric_limits<double>::infinity());
    Vec row_max(n, -std::numeric_limits<double>::infinity());
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        const auto ri = static_cast<Eigen::Index>(i);
        const auto cj = static_cast<Eigen::Index>(j);
        col_max[j] = std::max(col_max[j], game.a(ri, cj));
        row_max[i] = std::max(row_max[i], game.b(ri, cj));
      }
    }
    std::optional<std::pair<std::size_t, std::size_t>> pick;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        const auto ri = static_cast<Eigen::Index>(i);
        const auto cj = static_cast<Eigen::Index>(j);
        if (game.a(ri, cj) < col_max[j] - 1e-14 || game.b(ri, cj) < row_max[i] - 1e-14) {
          continue;
        }
        if (!pick) {
          pick = {i, j};
          continue;
        }
        const auto [pi, pj] = *pick;
        const double f_new = u.U_a(ri, cj);
        const double f_old = u.U_a(static_cast<Eigen::Index>(pi), static_cast<Eigen::Index>(pj));
        if (std::abs(f_new - f_old) > tol) {
          if (f_new < f_old) pick = {i, j};
          continue;
        }
        if (u.attacked[i] + u.protected_[j] > u.attacked[pi] + u.protected_[pj] + 1e-9) {
          pick = {i, j};
        }
      }
    }
    if (pick) {
      Vec r(n, 0.0), d(n, 0.0);
      r[pick->first] = 1.0;
      d[pick->second] = 1.0;
      best = rank(u, r, d, tol);
    }
  }

  const auto restarts = static_cast<std::size_t>(opts.restarts);
  std::vector<std::optional<Ranked>> results(restarts);
  parallel_for(restarts, opts.threads, [&](std::size_t k) {
    auto [r0, d0] = restart_point(game, static_cast<int>(k), opts.seed);
    LocalSolver solver(game, opts);
    auto [r, d] = solver.run(std::move(r0), std::move(d0));
    Candidate polished = polish(game, Candidate{std::move(r), std::move(d)});
    results[k] = rank(u, polished.r, polished.d, tol);
  });

  for (auto& res : results) {
    if (!best || better(*res, *best, tol)) best = std::move(res);
  }
  best->sol.restarts_used = opts.restarts;
  if (!best->verified) {
    throw NonConvergenceError("no restart reached an equilibrium within tolerance (best "
                              "best-response gap " +
                                  std::to_string(best->sol.epsilon) + ")",
                              best->sol.epsilon);
  }
  return std::move(best->sol);
}

}  // namespace lqrgame
