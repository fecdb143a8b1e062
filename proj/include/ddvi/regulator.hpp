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

#ifndef DDVI_REGULATOR_HPP_
#define DDVI_REGULATOR_HPP_

#include "ddvi/linops.hpp"

namespace ddvi {

struct RegulatorSolution {
  Matrix X;  // n x q
  Matrix U;  // m x q
  double objective = 0.0;           // Tr(X^T Qbar X + U^T Rbar U)
  double sylvester_residual = 0.0;  // ||XE - AX - BU - D|| / (1 + ||D||)
  double output_residual = 0.0;     // ||CX + F|| / (1 + ||F||)
  bool unique = false;  // constraints alone determine (X, U)
};

double regulator_objective(const Matrix& x, const Matrix& u,
                           const Matrix& qbar, const Matrix& rbar);

/// Solves XE = AX + BU + D, CX + F = 0. When the solution set is an affine
/// family, returns the minimizer of Tr(X^T Qbar X + U^T Rbar U) over it.
/// Throws AssumptionViolated naming the eigenvalue of E at which the rank
/// condition fails.
RegulatorSolution solve_regulator(const Matrix& a, const Matrix& b,
                                  const Matrix& c, const Matrix& d,
                                  const Matrix& e, const Matrix& f,
                                  const Matrix& qbar, const Matrix& rbar);

/// L = U + K X.
Matrix feedforward_gain(const Matrix& u, const Matrix& k, const Matrix& x);

}  // namespace ddvi

#endif  // DDVI_REGULATOR_HPP_
