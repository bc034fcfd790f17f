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

// Reference computations used only by tests. They avoid the library's own
// Lyapunov and Riccati code paths so that agreement means something.
#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <random>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "lqrgame/lqr.hpp"
#include "lqrgame/pattern.hpp"

namespace oracle {

using lqrgame::Matrix;
using lqrgame::Vector;

// Solves F^T X + X F + W = 0 through the Kronecker form
//   (I (x) F^T + F^T (x) I) vec(X) = -vec(W).
inline Matrix kron_lyapunov(const Matrix& f, const Matrix& w) {
  const Eigen::Index n = f.rows();
  const Matrix ft = f.transpose();
  Matrix big = Matrix::Zero(n * n, n * n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) {
      // column-major vec: X(i,j) -> i + j*n
      for (Eigen::Index k = 0; k < n; ++k) {
        big(i + j * n, k + j * n) += ft(i, k);  // (F^T X)(i,j)
        big(i + j * n, i + k * n) += f(k, j);   // (X F)(i,j)
      }
    }
  }
  const Vector rhs = -Eigen::Map<const Vector>(w.data(), n * n);
  const Vector x = big.fullPivLu().solve(rhs);
  return Eigen::Map<const Matrix>(x.data(), n, n);
}

inline double abscissa(const Matrix& m) {
  return Eigen::EigenSolver<Matrix>(m, false).eigenvalues().real().maxCoeff();
}

// J(K) = D^T P D, +inf when A - BK is not Hurwitz.
inline double kron_cost(const lqrgame::LinearSystem& sys, const Matrix& k) {
  const Matrix f = sys.A() - sys.B() * k;
  if (abscissa(f) >= -1e-9) return std::numeric_limits<double>::infinity();
  const Matrix w = sys.Q() + k.transpose() * sys.R() * k;
  const Matrix p = kron_lyapunov(f, w);
  return sys.D().dot(p * sys.D());
}

// J(K) by integrating the closed-loop impulse response with RK4:
//   x' = (A - BK) x, x(0) = D, J = int x^T (Q + K^T R K) x dt.
inline double impulse_cost(const lqrgame::LinearSystem& sys, const Matrix& k, double t_end,
                           double dt) {
  const Matrix f = sys.A() - sys.B() * k;
  const Matrix w = sys.Q() + k.transpose() * sys.R() * k;
  const Eigen::Index n = f.rows();
  // Augmented state [x; j].
  auto rhs = [&](const Vector& z) {
    Vector dz(n + 1);
    const Vector x = z.head(n);
    dz.head(n) = f * x;
    dz(n) = x.dot(w * x);
    return dz;
  };
  Vector z = Vector::Zero(n + 1);
  z.head(n) = sys.D();
  const auto steps = static_cast<long>(std::ceil(t_end / dt));
  for (long s = 0; s < steps; ++s) {
    const Vector k1 = rhs(z);
    const Vector k2 = rhs(z + 0.5 * dt * k1);
    const Vector k3 = rhs(z + 0.5 * dt * k2);
    const Vector k4 = rhs(z + dt * k3);
    z += dt / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);
  }
  return z(n);
}

// Central differences of kron_cost over every entry of K.
inline Matrix fd_gradient(const lqrgame::LinearSystem& sys, const Matrix& k, double h) {
  Matrix g(k.rows(), k.cols());
  for (Eigen::Index i = 0; i < k.rows(); ++i) {
    for (Eigen::Index j = 0; j < k.cols(); ++j) {
      Matrix kp = k, km = k;
      const double step = h * std::max(1.0, std::abs(k(i, j)));
      kp(i, j) += step;
      km(i, j) -= step;
      g(i, j) = (kron_cost(sys, kp) - kron_cost(sys, km)) / (2 * step);
    }
  }
  return g;
}

// Random open-loop stable system with one node holding all states and inputs.
inline lqrgame::LinearSystem random_stable_system(std::mt19937_64& gen, Eigen::Index m,
                                                  Eigen::Index r) {
  std::normal_distribution<double> nd(0.0, 1.0);
  auto randn = [&](Eigen::Index rows, Eigen::Index cols) {
    Matrix x(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
      for (Eigen::Index j = 0; j < cols; ++j) x(i, j) = nd(gen);
    return x;
  };
  Matrix a = randn(m, m);
  a -= (oracle::abscissa(a) + 0.5) * Matrix::Identity(m, m);
  const Matrix b = randn(m, r);
  const Vector d = randn(m, 1);
  const Matrix cq = randn(m, m);
  const Matrix q = cq * cq.transpose() / static_cast<double>(m) + 0.1 * Matrix::Identity(m, m);
  const Matrix cr = randn(r, r);
  const Matrix rr = cr * cr.transpose() / static_cast<double>(r) + 0.5 * Matrix::Identity(r, r);
  return lqrgame::LinearSystem(a, b, d, q, rr,
                               lqrgame::BlockLayout({static_cast<std::size_t>(m)},
                                                    {static_cast<std::size_t>(r)}));
}

// Two nodes, one state and one input each, strongly coupled and open-loop
// unstable so the diagonal-gain problem is not trivial.
inline lqrgame::LinearSystem coupled_pair() {
  Matrix a(2, 2);
  a << 0.5, 1.5,
       -1.0, -0.3;
  Matrix b(2, 2);
  b << 1.0, 0.2,
       0.0, 1.0;
  Vector d(2);
  d << 1.0, 0.5;
  Matrix q(2, 2);
  q << 2.0, 0.5,
       0.5, 1.0;
  const Matrix r = Matrix::Identity(2, 2);
  return lqrgame::LinearSystem(a, b, d, q, r, lqrgame::BlockLayout::uniform(2));
}

// Dense search of the diagonal-gain cost over a box, followed by shrinking
// grids around the incumbent.
struct GridResult {
  double k1 = 0.0;
  double k2 = 0.0;
  double J = std::numeric_limits<double>::infinity();
};

inline GridResult diagonal_grid_search(const lqrgame::LinearSystem& sys, double lo1, double hi1,
                                       double lo2, double hi2, int points, int refinements) {
  GridResult best;
  auto scan = [&](double a1, double b1, double a2, double b2) {
    for (int i = 0; i < points; ++i) {
      for (int j = 0; j < points; ++j) {
        Matrix k = Matrix::Zero(2, 2);
        k(0, 0) = a1 + (b1 - a1) * i / (points - 1);
        k(1, 1) = a2 + (b2 - a2) * j / (points - 1);
        const double J = kron_cost(sys, k);
        if (J < best.J) best = {k(0, 0), k(1, 1), J};
      }
    }
  };
  scan(lo1, hi1, lo2, hi2);
  double w1 = (hi1 - lo1) / (points - 1);
  double w2 = (hi2 - lo2) / (points - 1);
  for (int r = 0; r < refinements; ++r) {
    const GridResult c = best;
    scan(c.k1 - 2 * w1, c.k1 + 2 * w1, c.k2 - 2 * w2, c.k2 + 2 * w2);
    w1 *= 4.0 / (points - 1);
    w2 *= 4.0 / (points - 1);
  }
  return best;
}

}  // namespace oracle
