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

#include <cmath>
#include <string>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/QR>

#include "lqrgame/errors.hpp"
#include "lqrgame/lqr.hpp"

namespace lqrgame {

namespace {

constexpr double kSymmetryTol = 1e-8;
constexpr double kMinEigR = 1e-10;

double max_abs(const Matrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

void check_symmetric(const Matrix& m, const char* name) {
  if (m.rows() != m.cols()) {
    throw DimensionError(std::string(name) + " must be square");
  }
  const double asym = max_abs(m - m.transpose());
  if (asym > kSymmetryTol * (1.0 + max_abs(m))) {
    throw ValidationError(std::string(name) + " is not symmetric (max asymmetry " +
                          std::to_string(asym) + ")");
  }
}

// Matrix sign function of H by scaled Newton iteration.
bool matrix_sign(Matrix& z) {
  const Eigen::Index n = z.rows();
  for (int iter = 0; iter < 100; ++iter) {
    Eigen::PartialPivLU<Matrix> lu(z);
    const Matrix inv = lu.inverse();
    if (!inv.allFinite()) return false;
    double logdet = 0.0;
    const Matrix& lu_mat = lu.matrixLU();
    for (Eigen::Index i = 0; i < n; ++i) logdet += std::log(std::abs(lu_mat(i, i)));
    const double c = std::exp(logdet / static_cast<double>(n));
    if (!std::isfinite(c) || c == 0.0) return false;
    Matrix next = 0.5 * (z / c + c * inv);
    const double change = (next - z).norm();
    z = std::move(next);
    if (change <= 1e-13 * z.norm()) return true;
  }
  return false;
}

struct RiccatiInputs {
  const Matrix& a;
  const Matrix& b;
  const Matrix& q;
  const Matrix& r;
};

Matrix care_residual(const RiccatiInputs& in, const Matrix& p) {
  const Matrix rinv_bt = in.r.llt().solve(in.b.transpose());
  return in.a.transpose() * p + p * in.a - p * in.b * rinv_bt * p + in.q;
}

RiccatiSolution riccati(const RiccatiInputs& in) {
  const Eigen::Index m = in.a.rows();
  const Eigen::LLT<Matrix> r_llt(in.r);
  const Matrix rinv_bt = r_llt.solve(in.b.transpose());
  const Matrix g = in.b * rinv_bt;

  Matrix h(2 * m, 2 * m);
  h << in.a, -g, -in.q, -in.a.transpose();
  if (!matrix_sign(h)) {
    throw StabilizabilityError(
        "Riccati equation has no stabilizing solution (Hamiltonian has "
        "eigenvalues on the imaginary axis)");
  }
  const Matrix identity = Matrix::Identity(m, m);
  Matrix lhs(2 * m, m);
  lhs << h.topRightCorner(m, m), h.bottomRightCorner(m, m) + identity;
  Matrix rhs(2 * m, m);
  rhs << -(h.topLeftCorner(m, m) + identity), -h.bottomLeftCorner(m, m);
  Matrix p = symmetrize(lhs.colPivHouseholderQr().solve(rhs));

  RiccatiSolution out;
  if (!p.allFinite()) {
    throw StabilizabilityError("Riccati equation has no stabilizing solution");
  }

  // Newton-Kleinman steps from the sign-function estimate.
  for (int iter = 0; iter < 8; ++iter) {
    const Matrix k = rinv_bt * p;
    const Matrix closed = in.a - in.b * k;
    if (!is_hurwitz(closed).hurwitz) break;
    const Matrix next =
        solve_lyapunov(closed, in.q + k.transpose() * in.r * k);
    const double change = (next - p).norm();
    p = next;
    if (change <= 1e-14 * (1.0 + p.norm())) break;
  }

  out.P = p;
  out.K = rinv_bt * p;
  out.residual = care_residual(in, p).norm();
  const auto hurwitz = is_hurwitz(in.a - in.b * out.K);
  if (!hurwitz.hurwitz) {
    throw StabilizabilityError(
        "Riccati solution is not stabilizing (closed-loop abscissa " +
        std::to_string(hurwitz.abscissa) + ")");
  }
  if (!(out.residual <= 1e-7 * (1.0 + p.norm()))) {
    throw StabilizabilityError("Riccati residual " + std::to_string(out.residual) +
                               " exceeds tolerance");
  }
  return out;
}

}  // namespace

LinearSystem::LinearSystem(Matrix a, Matrix b, Vector d, Matrix q, Matrix r,
                           BlockLayout layout)
    : a_(std::move(a)),
      b_(std::move(b)),
      d_(std::move(d)),
      q_(std::move(q)),
      r_(std::move(r)),
      layout_(std::move(layout)) {
  const auto m = static_cast<Eigen::Index>(layout_.states());
  const auto inputs = static_cast<Eigen::Index>(layout_.inputs());
  auto expect = [](bool ok, const std::string& what) {
    if (!ok) throw DimensionError(what);
  };
  expect(a_.rows() == m && a_.cols() == m,
         "A must be " + std::to_string(m) + "x" + std::to_string(m) +
             " to match the layout state sizes");
  expect(b_.rows() == m && b_.cols() == inputs,
         "B must be " + std::to_string(m) + "x" + std::to_string(inputs) +
             " to match the layout");
  expect(d_.size() == m, "D must have " + std::to_string(m) + " entries");
  expect(q_.rows() == m && q_.cols() == m, "Q must be " + std::to_string(m) + "x" +
                                               std::to_string(m));
  expect(r_.rows() == inputs && r_.cols() == inputs,
         "R must be " + std::to_string(inputs) + "x" + std::to_string(inputs));
  expect(inputs > 0, "the system needs at least one input");
  if (!a_.allFinite() || !b_.allFinite() || !d_.allFinite() || !q_.allFinite() ||
      !r_.allFinite()) {
    throw ValidationError("system matrices contain non-finite entries");
  }

  check_symmetric(q_, "Q");
  check_symmetric(r_, "R");
  q_ = symmetrize(q_);
  r_ = symmetrize(r_);

  Eigen::SelfAdjointEigenSolver<Matrix> q_eig(q_, Eigen::EigenvaluesOnly);
  if (q_eig.eigenvalues().minCoeff() < -kSymmetryTol * (1.0 + max_abs(q_))) {
    throw ValidationError("Q is not positive semidefinite (minimum eigenvalue " +
                          std::to_string(q_eig.eigenvalues().minCoeff()) + ")");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> r_eig(r_, Eigen::EigenvaluesOnly);
  if (r_eig.eigenvalues().minCoeff() <= kMinEigR) {
    throw ValidationError("R is not positive definite (minimum eigenvalue " +
                          std::to_string(r_eig.eigenvalues().minCoeff()) + ")");
  }

  riccati({a_, b_, q_, r_});
}

RiccatiSolution solve_riccati(const LinearSystem& sys) {
  return riccati({sys.A(), sys.B(), sys.Q(), sys.R()});
}

RiccatiSolution solve_riccati(const Matrix& a, const Matrix& b, const Matrix& q,
                              const Matrix& r) {
  return riccati({a, b, q, r});
}

Matrix riccati_residual(const LinearSystem& sys, const Matrix& p) {
  return care_residual({sys.A(), sys.B(), sys.Q(), sys.R()}, p);
}

double evaluate_cost(const LinearSystem& sys, const Matrix& k) {
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
  const Matrix pk = solve_lyapunov(closed, sys.Q() + k.transpose() * sys.R() * k);
  return sys.D().dot(pk * sys.D());
}

}  // namespace lqrgame
