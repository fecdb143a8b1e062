// Copyright 2026 The ddvi Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "ddvi/regulator.hpp"

#include <sstream>
#include <stdexcept>

#include "ddvi/cw_plant.hpp"
#include "ddvi/errors.hpp"

namespace ddvi {

double regulator_objective(const Matrix& x, const Matrix& u,
                           const Matrix& qbar, const Matrix& rbar) {
  return (x.transpose() * qbar * x + u.transpose() * rbar * u).trace();
}

RegulatorSolution solve_regulator(const Matrix& a, const Matrix& b,
                                  const Matrix& c, const Matrix& d,
                                  const Matrix& e, const Matrix& f,
                                  const Matrix& qbar, const Matrix& rbar) {
  const Eigen::Index n = a.rows(), m = b.cols(), p = c.rows(), q = e.rows();
  if (a.cols() != n || b.rows() != n || c.cols() != n || d.rows() != n ||
      d.cols() != q || e.cols() != q || f.rows() != p || f.cols() != q ||
      qbar.rows() != n || qbar.cols() != n || rbar.rows() != m ||
      rbar.cols() != m) {
    throw std::invalid_argument("solve_regulator: inconsistent dimensions");
  }
  if (Eigen::LLT<Matrix>(qbar).info() != Eigen::Success ||
      Eigen::LLT<Matrix>(rbar).info() != Eigen::Success) {
    throw AssumptionViolated(
        "solve_regulator: Qbar and Rbar must be positive definite");
  }
  for (const ModeRank& mr : regulator_rank_condition(a, b, c, e)) {
    if (mr.rank < mr.required) {
      std::ostringstream os;
      os << "solve_regulator: rank [A - lambda I, B; C, 0] = " << mr.rank
         << " < " << mr.required << " at lambda = " << mr.lambda.real()
         << (mr.lambda.imag() < 0 ? "" : "+") << mr.lambda.imag() << "i";
      throw AssumptionViolated(os.str());
    }
  }

  const Matrix iq = Matrix::Identity(q, q);
  const Matrix in = Matrix::Identity(n, n);
  const Eigen::Index nx = n * q, nu = m * q;
  Matrix mat = Matrix::Zero(nx + p * q, nx + nu);
  mat.topLeftCorner(nx, nx) = kron(e.transpose(), in) - kron(iq, a);
  mat.topRightCorner(nx, nu) = -kron(iq, b);
  mat.bottomLeftCorner(p * q, nx) = kron(iq, c);
  Vector rhs(nx + p * q);
  rhs << vec(d), -vec(f);

  Matrix h = Matrix::Zero(nx + nu, nx + nu);
  h.topLeftCorner(nx, nx) = kron(iq, qbar);
  h.bottomRightCorner(nu, nu) = kron(iq, rbar);

  const AffineQpSolution qp = minimize_on_affine(h, mat, rhs);

  RegulatorSolution sol;
  sol.X = unvec(qp.z.head(nx), n, q);
  sol.U = unvec(qp.z.tail(nu), m, q);
  sol.unique = qp.null_dim == 0;
  sol.objective = regulator_objective(sol.X, sol.U, qbar, rbar);
  sol.sylvester_residual =
      (sol.X * e - a * sol.X - b * sol.U - d).norm() / (1.0 + d.norm());
  sol.output_residual = (c * sol.X + f).norm() / (1.0 + f.norm());
  if (sol.sylvester_residual > 1e-8 || sol.output_residual > 1e-8) {
    std::ostringstream os;
    os << "solve_regulator: equations not satisfied (residuals "
       << sol.sylvester_residual << ", " << sol.output_residual << ")";
    throw NumericalError(os.str());
  }
  return sol;
}

Matrix feedforward_gain(const Matrix& u, const Matrix& k, const Matrix& x) {
  if (k.cols() != x.rows() || k.rows() != u.rows() || x.cols() != u.cols()) {
    throw std::invalid_argument("feedforward_gain: shape mismatch");
  }
  return u + k * x;
}

}  // namespace ddvi
