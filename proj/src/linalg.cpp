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
#include <complex>
#include <limits>

#include <Eigen/Eigenvalues>

#include "lqrgame/errors.hpp"
#include "lqrgame/lqr.hpp"

namespace lqrgame {

namespace {

using ComplexMatrix = Eigen::MatrixXcd;

}  // namespace

HurwitzReport is_hurwitz(const Matrix& m) {
  if (m.rows() != m.cols()) throw DimensionError("is_hurwitz needs a square matrix");
  HurwitzReport report;
  if (m.rows() == 0) {
    report.hurwitz = true;
    report.abscissa = -std::numeric_limits<double>::infinity();
    return report;
  }
  Eigen::EigenSolver<Matrix> solver(m, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) {
    report.abscissa = std::numeric_limits<double>::infinity();
    return report;
  }
  report.abscissa = solver.eigenvalues().real().maxCoeff();
  report.hurwitz = report.abscissa < -kHurwitzMargin;
  return report;
}

// Bartels-Stewart on the complex Schur form F = U T U^H. With Y = U^H X U and
// C = U^H W U the equation becomes T^H Y + Y T = -C, solved column by column
// since T^H is lower triangular.
Matrix solve_lyapunov(const Matrix& f, const Matrix& w) {
  const Eigen::Index n = f.rows();
  if (f.cols() != n || w.rows() != n || w.cols() != n) {
    throw DimensionError("solve_lyapunov: F and W must be square of equal size");
  }
  if (n == 0) return Matrix(0, 0);

  Eigen::ComplexSchur<Matrix> schur(f);
  if (schur.info() != Eigen::Success) {
    throw InstabilityError("Schur decomposition failed",
                           std::numeric_limits<double>::quiet_NaN());
  }
  const ComplexMatrix& t = schur.matrixT();
  const ComplexMatrix& u = schur.matrixU();

  double abscissa = -std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < n; ++i) abscissa = std::max(abscissa, t(i, i).real());
  if (!(abscissa < -kHurwitzMargin)) {
    throw InstabilityError("Lyapunov operator is not Hurwitz (spectral abscissa " +
                               std::to_string(abscissa) + ")",
                           abscissa);
  }

  const ComplexMatrix c = u.adjoint() * w.cast<std::complex<double>>() * u;
  ComplexMatrix y = ComplexMatrix::Zero(n, n);
  Eigen::VectorXcd rhs(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    rhs = -c.col(j);
    for (Eigen::Index k = 0; k < j; ++k) rhs -= y.col(k) * t(k, j);
    // (T^H + t_jj I) y_j = rhs, forward substitution.
    for (Eigen::Index i = 0; i < n; ++i) {
      std::complex<double> acc = rhs(i);
      for (Eigen::Index k = 0; k < i; ++k) acc -= std::conj(t(k, i)) * y(k, j);
      y(i, j) = acc / (std::conj(t(i, i)) + t(j, j));
    }
  }
  const Matrix x = (u * y * u.adjoint()).real();
  return symmetrize(x);
}

}  // namespace lqrgame
