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

#include "ddvi/sim.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "ddvi/errors.hpp"

namespace ddvi {

Policy feedback_feedforward(Matrix k, Matrix l) {
  return [k = std::move(k), l = std::move(l)](double, const Vector& x,
                                              const Vector& v) -> Vector {
    return -k * x + l * v;
  };
}

Policy exploration_policy(Matrix k0, std::function<Vector(double)> noise) {
  return [k0 = std::move(k0), noise = std::move(noise)](
             double t, const Vector& x, const Vector&) -> Vector {
    return -k0 * x + noise(t);
  };
}

Trajectory integrate(const PlantModel& plant, const Policy& policy,
                     const Vector& x0, const Vector& v0, double horizon,
                     double dt, const IntegrateOptions& options) {
  plant.check_dimensions();
  if (!(dt > 0.0)) throw std::invalid_argument("integrate: dt must be > 0");
  if (!(horizon >= dt)) {
    throw std::invalid_argument("integrate: horizon must be at least dt");
  }
  if (x0.size() != plant.n() || v0.size() != plant.q()) {
    throw std::invalid_argument("integrate: initial state size mismatch");
  }
  const Exosystem exo = Exosystem::FromMatrix(plant.E);
  const long steps = std::lround(horizon / dt);
  const Eigen::Index samples = steps + 1;

  Trajectory traj;
  traj.t.reserve(samples);
  traj.x.resize(plant.n(), samples);
  traj.v.resize(plant.q(), samples);
  traj.u.resize(plant.m(), samples);
  traj.e.resize(plant.p(), samples);

  auto exo_at = [&](double t) { return exo.advance(v0, t - options.t0); };
  auto rhs = [&](double t, const Vector& x) -> Vector {
    const Vector v = exo_at(t);
    return plant.A * x + plant.B * policy(t, x, v) + plant.D * v;
  };

  Vector x = x0;
  Eigen::Index kept = 0;
  for (long i = 0; i <= steps; ++i) {
    const double t = options.t0 + static_cast<double>(i) * dt;
    const Vector v = exo_at(t);
    const Vector u = policy(t, x, v);
    traj.t.push_back(t);
    traj.x.col(i) = x;
    traj.v.col(i) = v;
    traj.u.col(i) = u;
    traj.e.col(i) = plant.C * x + plant.F * v;
    kept = i + 1;
    if (i == steps) break;

    const Vector k1 = rhs(t, x);
    const Vector k2 = rhs(t + 0.5 * dt, x + 0.5 * dt * k1);
    const Vector k3 = rhs(t + 0.5 * dt, x + 0.5 * dt * k2);
    const Vector k4 = rhs(t + dt, x + dt * k3);
    x += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);

    const double norm = x.norm();
    if (!std::isfinite(norm) || norm > options.state_cap) {
      const double when = t + dt;
      if (!options.truncate_on_blowup) {
        std::ostringstream os;
        os << "integrate: state blew up at t = " << when << " s (|x| = "
           << norm << ")";
        throw NumericalError(os.str());
      }
      traj.blowup_time = when;
      break;
    }
  }
  traj.x.conservativeResize(Eigen::NoChange, kept);
  traj.v.conservativeResize(Eigen::NoChange, kept);
  traj.u.conservativeResize(Eigen::NoChange, kept);
  traj.e.conservativeResize(Eigen::NoChange, kept);
  return traj;
}

Vector hill_initial_state(const OrbitalElements& deputy,
                          const OrbitalElements& chief, double mu) {
  constexpr double deg = std::numbers::pi / 180.0;
  const double a = chief.semi_major_axis_km;
  const double n = std::sqrt(mu / (a * a * a));
  const double inc = chief.inclination_deg * deg;
  const double theta = (chief.arg_perigee_deg + chief.true_anomaly_deg) * deg;
  const double da = deputy.semi_major_axis_km - a;
  const double dtheta = ((deputy.arg_perigee_deg + deputy.true_anomaly_deg) -
                         (chief.arg_perigee_deg + chief.true_anomaly_deg)) *
                        deg;
  const double di = (deputy.inclination_deg - chief.inclination_deg) * deg;
  const double draan = (deputy.raan_deg - chief.raan_deg) * deg;

  Vector s(6);
  s(0) = da;
  s(1) = a * (dtheta + std::cos(inc) * draan);
  s(2) = a * (std::sin(theta) * di - std::cos(theta) * std::sin(inc) * draan);
  s(3) = 0.0;
  s(4) = -1.5 * n * da;
  s(5) = a * n * (std::cos(theta) * di + std::sin(theta) * std::sin(inc) * draan);
  return s;
}

RunMetrics metrics(const Trajectory& traj, const Matrix& x_reg,
                   const Matrix& u_reg, const Matrix& q, const Matrix& r,
                   double settle_tolerance) {
  RunMetrics out;
  const Eigen::Index count = traj.size();
  if (count == 0) return out;
  if (x_reg.rows() != traj.x.rows() || x_reg.cols() != traj.v.rows() ||
      u_reg.rows() != traj.u.rows() || u_reg.cols() != traj.v.rows()) {
    throw std::invalid_argument("metrics: regulator shapes do not match");
  }

  std::vector<double> stage(count);
  for (Eigen::Index i = 0; i < count; ++i) {
    const Vector xb = traj.x.col(i) - x_reg * traj.v.col(i);
    const Vector ub = traj.u.col(i) - u_reg * traj.v.col(i);
    stage[i] = xb.dot(q * xb) + ub.dot(r * ub);
    out.max_input = std::max(out.max_input, traj.u.col(i).norm());
  }
  for (Eigen::Index i = 1; i < count; ++i) {
    out.cost += 0.5 * (traj.t[i] - traj.t[i - 1]) * (stage[i] + stage[i - 1]);
  }
  out.terminal_error = traj.e.col(count - 1).norm();

  Eigen::Index settled = count;
  for (Eigen::Index i = count; i-- > 0;) {
    if (traj.e.col(i).norm() > settle_tolerance) break;
    settled = i;
  }
  if (settled < count) out.settling_time = traj.t[settled];
  return out;
}

}  // namespace ddvi
