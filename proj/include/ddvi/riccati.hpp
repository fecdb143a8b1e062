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

#ifndef DDVI_RICCATI_HPP_
#define DDVI_RICCATI_HPP_

#include <optional>
#include <vector>

#include "ddvi/linops.hpp"

namespace ddvi {

struct AreSolution {
  SymMatrix P;
  Matrix K;
  double residual = 0.0;  // relative, see are_residual
};

/// ||A^T P + P A + Q - P B R^-1 B^T P|| / ||Q||, induced 2-norms.
double are_residual(const Matrix& a, const Matrix& b, const Matrix& q,
                    const Matrix& r, const Matrix& p);

/// Solves A^T P + P A + Q = 0 through the vectorized (Kronecker) system.
Matrix solve_lyapunov(const Matrix& a, const Matrix& q);

/// Stabilizing ARE solution. Matrix sign function on the Hamiltonian,
/// polished with Newton-Kleinman steps. Throws AssumptionViolated when
/// (A, B) is not stabilizable, (A, sqrt(Q)) is not observable or R is not
/// positive definite.
AreSolution solve_are_exact(const Matrix& a, const Matrix& b, const Matrix& q,
                            const Matrix& r);

struct KleinmanResult {
  std::vector<SymMatrix> values;  // P_1, P_2, ...
  std::vector<Matrix> gains;      // K_0, K_1, ...
  AreSolution solution;
};

/// Kleinman policy iteration from a stabilizing K0. Stops when
/// ||P_k - P_{k-1}|| <= tol ||P_k||.
KleinmanResult kleinman_pi(const Matrix& a, const Matrix& b, const Matrix& q,
                           const Matrix& r, const Matrix& k0,
                           double tol = 1e-10, int max_iterations = 200);

/// Step sizes, expanding bounds and stopping threshold for value iteration.
struct ViSchedule {
  double step_scale = 1.0;     // eps_k = step_scale / (k + 1)^step_exponent
  double step_exponent = 1.0;  // in (0, 1]: sum eps_k diverges, eps_k -> 0
  double ball_base = 10.0;     // B_r = ball_base * (r + 1)
  std::optional<double> fixed_bound;  // B_r = gamma for all r when set
  double threshold = 1e-6;
  SymMatrix p0;  // empty means identity of the problem size
  long max_iterations = 1'000'000;

  double epsilon(long k) const;
  double bound(long r) const;
  SymMatrix initial_value(Eigen::Index n) const;
  /// Throws ConfigError for schedules that break the step-size conditions.
  void validate() const;
};

struct ViTraceEntry {
  long k = 0;
  double epsilon = 0.0;
  double metric = 0.0;  // ||P~_{k+1} - P_k|| / eps_k
  double value_norm = 0.0;
  long r = 0;
  bool reset = false;
};

/// Iteration history. Long runs keep the first 1000 entries, every 100th
/// after that, every reset and the final entry.
struct ViTrace {
  std::vector<ViTraceEntry> entries;
  long iterations = 0;
  long resets = 0;
  int theta_assemblies = 0;

  void record(const ViTraceEntry& e, bool force = false);
};

struct ViResult {
  AreSolution solution;
  ViTrace trace;
};

/// Model-based value iteration. Throws NotConverged at the iteration cap.
ViResult model_based_vi(const Matrix& a, const Matrix& b, const Matrix& q,
                        const Matrix& r, const ViSchedule& schedule);

}  // namespace ddvi

#endif  // DDVI_RICCATI_HPP_
