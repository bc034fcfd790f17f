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

#include <Eigen/Core>

#include "lqrgame/pattern.hpp"

namespace lqrgame {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

inline constexpr double kHurwitzMargin = 1e-9;

// Continuous-time network model  x' = A x + B u + D w  with quadratic weights.
// Construction validates dimensions against the layout, symmetrizes Q and R,
// checks Q >= 0 and R > 0, and confirms (A, B) admits a stabilizing Riccati
// solution.
class LinearSystem {
 public:
  LinearSystem(Matrix a, Matrix b, Vector d, Matrix q, Matrix r, BlockLayout layout);

  const Matrix& A() const noexcept { return a_; }
  const Matrix& B() const noexcept { return b_; }
  const Vector& D() const noexcept { return d_; }
  const Matrix& Q() const noexcept { return q_; }
  const Matrix& R() const noexcept { return r_; }
  const BlockLayout& layout() const noexcept { return layout_; }

  Eigen::Index states() const noexcept { return a_.rows(); }
  Eigen::Index inputs() const noexcept { return b_.cols(); }

 private:
  Matrix a_, b_;
  Vector d_;
  Matrix q_, r_;
  BlockLayout layout_;
};

struct HurwitzReport {
  bool hurwitz = false;
  double abscissa = 0.0;  // largest real part of the spectrum
};

HurwitzReport is_hurwitz(const Matrix& m);

// Solves F^T X + X F + W = 0 for Hurwitz F. Throws InstabilityError otherwise.
Matrix solve_lyapunov(const Matrix& f, const Matrix& w);

struct RiccatiSolution {
  Matrix P;
  Matrix K;  // R^{-1} B^T P
  double residual = 0.0;  // Frobenius norm of the CARE residual
};

// Stabilizing solution of A^T P + P A - P B R^{-1} B^T P + Q = 0.
RiccatiSolution solve_riccati(const LinearSystem& sys);
RiccatiSolution solve_riccati(const Matrix& a, const Matrix& b, const Matrix& q,
                              const Matrix& r);

// Residual of the continuous algebraic Riccati equation at P.
Matrix riccati_residual(const LinearSystem& sys, const Matrix& p);

// Impulse-response cost J(K) = D^T P_K D of the closed loop u = -K x.
double evaluate_cost(const LinearSystem& sys, const Matrix& k);

// Symmetric part (M + M^T) / 2.
inline Matrix symmetrize(const Matrix& m) { return 0.5 * (m + m.transpose()); }

}  // namespace lqrgame
