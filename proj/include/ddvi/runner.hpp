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

#ifndef DDVI_RUNNER_HPP_
#define DDVI_RUNNER_HPP_

#include "ddvi/adp.hpp"
#include "ddvi/regulator.hpp"
#include "ddvi/riccati.hpp"
#include "ddvi/scenario.hpp"
#include "ddvi/sim.hpp"

namespace ddvi {

/// Model-based reference gains for a scenario.
struct OracleGains {
  AreSolution are;
  RegulatorSolution regulator;
  Matrix L;
};

OracleGains compute_oracle(const PlantModel& plant, const ScenarioConfig& c);

struct LearnResult {
  LearnedPolicy policy;
  Trajectory collection;
};

/// Collect data under u = -K0 x + eta up to learn_end, then run the
/// data-driven value iteration.
LearnResult learn(const ScenarioConfig& c);
Trajectory collect(const PlantModel& plant, const ScenarioConfig& c);

struct BranchResult {
  Trajectory trajectory;
  RunMetrics metrics;
};

struct Comparison {
  BranchResult vi;
  BranchResult lqr;
  OracleGains oracle;
};

/// Runs u = -K x + L v and the oracle gains from the same initial state
/// over the full horizon. Both branches are scored against the model X, U.
Comparison compare(const ScenarioConfig& c, const Matrix& k, const Matrix& l);

struct ScenarioResult {
  LearnResult learned;
  Comparison comparison;
};

ScenarioResult run_scenario(const ScenarioConfig& c);

}  // namespace ddvi

#endif  // DDVI_RUNNER_HPP_
