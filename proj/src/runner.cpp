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

#include "ddvi/runner.hpp"

#include <future>

namespace ddvi {

OracleGains compute_oracle(const PlantModel& plant, const ScenarioConfig& c) {
  OracleGains g;
  g.are = solve_are_exact(plant.A, plant.B, c.Q, c.R);
  g.regulator = solve_regulator(plant.A, plant.B, plant.C, plant.D, plant.E,
                                plant.F, c.Qbar, c.Rbar);
  g.L = feedforward_gain(g.regulator.U, g.are.K, g.regulator.X);
  return g;
}

Trajectory collect(const PlantModel& plant, const ScenarioConfig& c) {
  NoiseSpec spec = c.noise;
  spec.axes = plant.m();
  const ExplorationNoise noise(spec);
  IntegrateOptions opts;
  opts.state_cap = c.state_cap_km;
  opts.truncate_on_blowup = true;
  return integrate(plant,
                   exploration_policy(c.K0, [noise](double t) {
                     return noise(t);
                   }),
                   c.initial_state(), c.v0, c.learn_end(), c.dt_s, opts);
}

LearnResult learn(const ScenarioConfig& c) {
  c.validate();
  const PlantModel plant = c.plant();
  LearnResult out;
  out.collection = collect(plant, c);
  const XjBasis basis = build_xj_basis(plant.C, plant.F);
  AdpOptions opts;
  opts.windows = c.window_spec();
  opts.qbar = c.Qbar;
  opts.rbar = c.Rbar;
  out.policy =
      run_algorithm2(out.collection, basis, c.Q, c.R, c.schedule, opts);
  return out;
}

Comparison compare(const ScenarioConfig& c, const Matrix& k, const Matrix& l) {
  c.validate();
  const PlantModel plant = c.plant();
  Comparison out;
  out.oracle = compute_oracle(plant, c);

  IntegrateOptions opts;
  opts.state_cap = c.state_cap_km;
  opts.truncate_on_blowup = true;
  const Vector x0 = c.initial_state();
  auto branch = [&](const Matrix& kk, const Matrix& ll) {
    BranchResult b;
    b.trajectory = integrate(plant, feedback_feedforward(kk, ll), x0, c.v0,
                             c.horizon(), c.dt_s, opts);
    b.metrics = metrics(b.trajectory, out.oracle.regulator.X,
                        out.oracle.regulator.U, c.Q, c.R,
                        c.settle_tolerance_km);
    return b;
  };
  auto vi = std::async(std::launch::async, branch, k, l);
  out.lqr = branch(out.oracle.are.K, out.oracle.L);
  out.vi = vi.get();
  return out;
}

ScenarioResult run_scenario(const ScenarioConfig& c) {
  ScenarioResult r;
  r.learned = learn(c);
  r.comparison = compare(c, r.learned.policy.K, r.learned.policy.L);
  return r;
}

}  // namespace ddvi
