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

#ifndef DDVI_ADP_HPP_
#define DDVI_ADP_HPP_

#include <cstdint>
#include <vector>

#include "ddvi/linops.hpp"
#include "ddvi/riccati.hpp"
#include "ddvi/sim.hpp"

namespace ddvi {

/// X_0 = 0, X_1 = min-norm solution of C X = -F, then an orthonormal basis
/// of {X : C X = 0} (in the vec inner product).
struct XjBasis {
  std::vector<Matrix> X;
  Eigen::Index null_dim = 0;  // h = (n - p) q

  std::size_t size() const { return X.size(); }
};

XjBasis build_xj_basis(const Matrix& c, const Matrix& f);

struct WindowSpec {
  double window = 5.0;  // Delta t, a multiple of the trajectory step
  long count = 120;     // rho
  long first_sample = 0;
};

/// Per-window integrals for one X_j. Row l covers [t_l, t_{l+1}].
struct DataLog {
  Matrix ixx;  // rho x n(n+1)/2, integral of vecv(xb)
  Matrix gxu;  // rho x nm, integral of xb (x) u
  Matrix gxv;  // rho x nq, integral of xb (x) v
  Matrix dxx;  // rho x n(n+1)/2, vecv(xb) increments
  std::vector<double> boundaries;  // rho + 1 window edges

  long windows() const { return static_cast<long>(ixx.rows()); }
};

DataLog accumulate(const Trajectory& traj, const Matrix& xj,
                   const WindowSpec& spec);
/// One log per basis element, computed concurrently.
std::vector<DataLog> accumulate(const Trajectory& traj, const XjBasis& basis,
                                const WindowSpec& spec);

struct RankCheck {
  bool full = false;
  long rank = 0;
  long required = 0;
};

/// Rank of [ixx, gxu, gxv] after column equilibration.
RankCheck check_rank(const DataLog& log);

/// Least-squares form of the value-derivative identity for one log:
///   Theta [vecs H; vec K; vec W] = dxx vecs(P),  W = (D - S(X_j))^T P.
/// Theta is assembled and factored once at construction.
class DataEquation {
 public:
  DataEquation(const DataLog& log, const Matrix& r, Eigen::Index n,
               Eigen::Index q);

  struct Solution {
    SymMatrix H;  // A^T P + P A
    Matrix K;     // R^-1 B^T P, m x n
    Matrix W;     // (D - S(X_j))^T P, q x n
  };
  Solution solve(const SymMatrix& p) const;
  /// ||Theta z - dxx vecs(P)|| / ||dxx vecs(P)|| at the least-squares z.
  double relative_residual(const SymMatrix& p) const;

  long rank() const { return rank_; }
  double condition_number() const { return cond_; }

  /// Number of Theta assemblies in this process.
  static long assemblies();

 private:
  Vector unknowns(const SymMatrix& p) const;

  Eigen::Index n_, m_, q_;
  Matrix theta_;
  Matrix dxx_;
  Matrix solve_map_;  // Theta^+ dxx
  long rank_ = 0;
  double cond_ = 0.0;
};

struct ViDataStep {
  SymMatrix P;
  Matrix K;
  SymMatrix H;
  double metric = 0.0;  // ||H + Q - K^T R K||
  bool reset = false;
};

ViDataStep vi_data_step(const DataEquation& eq, const SymMatrix& p,
                        const Matrix& q, const Matrix& r, double epsilon,
                        double bound, const SymMatrix& p0);

struct LearnedPolicy {
  Matrix K, L, X, U;
  SymMatrix P;
  Matrix B_hat, D_hat;
  std::vector<Matrix> S;  // S(X_j) recovered from data
  std::vector<long> ranks;
  double theta_condition = 0.0;
  double value_condition = 0.0;
  double data_residual = 0.0;  // worst relative LS residual at P
  double regulator_residual = 0.0;
  bool unique = false;
  ViTrace trace;
};

struct AdpOptions {
  WindowSpec windows;
  Matrix qbar;  // empty means identity
  Matrix rbar;
};

LearnedPolicy run_algorithm2(const Trajectory& traj, const XjBasis& basis,
                             const Matrix& q, const Matrix& r,
                             const ViSchedule& schedule,
                             const AdpOptions& options);

struct NoiseSpec {
  Eigen::Index axes = 3;
  long sinusoids_per_axis = 100;
  double amplitude = 0.01;
  double omega_min = 1e-4;
  double omega_max = 1.0;
  std::uint64_t seed = 1;
};

/// eta_i(t) = a sum_k sin(w_ik t + phi_ik) with w, phi drawn from a seeded
/// mt19937_64 mapped to [0, 1) by the top 53 bits.
class ExplorationNoise {
 public:
  explicit ExplorationNoise(const NoiseSpec& spec);

  Vector operator()(double t) const;
  /// Bound on each component.
  double bound() const;
  const Matrix& frequencies() const { return omega_; }

 private:
  double amplitude_;
  Matrix omega_;  // axes x count
  Matrix phase_;
};

}  // namespace ddvi

#endif  // DDVI_ADP_HPP_
