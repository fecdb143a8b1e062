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

#ifndef DDVI_SIM_HPP_
#define DDVI_SIM_HPP_

#include <functional>
#include <limits>
#include <optional>
#include <vector>

#include "ddvi/cw_plant.hpp"
#include "ddvi/linops.hpp"

namespace ddvi {

/// Samples on a uniform time grid; column i of each matrix is sample i.
struct Trajectory {
  std::vector<double> t;
  Matrix x;  // n x N
  Matrix v;  // q x N
  Matrix u;  // m x N
  Matrix e;  // p x N
  std::optional<double> blowup_time;

  Eigen::Index size() const { return static_cast<Eigen::Index>(t.size()); }
  double step() const { return t.size() > 1 ? t[1] - t[0] : 0.0; }
  double duration() const { return t.empty() ? 0.0 : t.back() - t.front(); }
};

using Policy =
    std::function<Vector(double t, const Vector& x, const Vector& v)>;

/// u = -K x + L v.
Policy feedback_feedforward(Matrix k, Matrix l);
/// u = -K0 x + eta(t).
Policy exploration_policy(Matrix k0, std::function<Vector(double)> noise);

struct IntegrateOptions {
  double t0 = 0.0;
  double state_cap = std::numeric_limits<double>::infinity();
  // Stop and keep the samples so far (instead of throwing) when the state
  // becomes non-finite or exceeds the cap.
  bool truncate_on_blowup = false;
};

/// Classical RK4 for xdot = Ax + Bu + Dv with v propagated exactly.
Trajectory integrate(const PlantModel& plant, const Policy& policy,
                     const Vector& x0, const Vector& v0, double horizon,
                     double dt, const IntegrateOptions& options = {});

/// First-order element-difference map for near-circular orbits; returns
/// [x, y, z, xdot, ydot, zdot] of the deputy in the chief Hill frame.
Vector hill_initial_state(const OrbitalElements& deputy,
                          const OrbitalElements& chief,
                          double mu = kEarthMuKm3s2);

struct RunMetrics {
  double cost = 0.0;            // integral of xb^T Q xb + ub^T R ub
  double terminal_error = 0.0;  // ||e(T)||
  std::optional<double> settling_time;  // unset when never settled
  double max_input = 0.0;
};

/// xb = x - X v, ub = u - U v. Settling time is the earliest sample after
/// which ||e|| stays within the tolerance.
RunMetrics metrics(const Trajectory& traj, const Matrix& x_reg,
                   const Matrix& u_reg, const Matrix& q, const Matrix& r,
                   double settle_tolerance = 1e-3);

}  // namespace ddvi

#endif  // DDVI_SIM_HPP_
