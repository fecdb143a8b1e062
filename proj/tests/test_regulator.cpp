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

#include <gtest/gtest.h>

#include "ddvi/cw_plant.hpp"
#include "ddvi/errors.hpp"
#include "test_support.hpp"

namespace ddvi {
namespace {

Matrix scalar(double x) { return Matrix::Constant(1, 1, x); }

TEST(Regulator, ScalarSetPoint) {
  const RegulatorSolution s =
      solve_regulator(scalar(0), scalar(1), scalar(1), scalar(0), scalar(0),
                      scalar(-1), scalar(1), scalar(1));
  EXPECT_NEAR(s.X(0, 0), 1.0, 1e-12);
  EXPECT_NEAR(s.U(0, 0), 0.0, 1e-12);
  EXPECT_TRUE(s.unique);
}

TEST(Regulator, BenchmarkSatisfiesEquations) {
  const ScenarioConfig c = testing::benchmark_config();
  const PlantModel p = c.plant();
  const RegulatorSolution s =
      solve_regulator(p.A, p.B, p.C, p.D, p.E, p.F, c.Qbar, c.Rbar);
  EXPECT_LE(s.sylvester_residual, 1e-10);
  EXPECT_LE(s.output_residual, 1e-10);
  EXPECT_NEAR(s.objective, regulator_objective(s.X, s.U, c.Qbar, c.Rbar),
              1e-12 * s.objective);
}

TEST(Regulator, BenchmarkFeedforwardMatchesIndependentSolver) {
  const OracleGains& o = testing::benchmark_oracle();
  // numpy/scipy reference (Kronecker solve with minimum-norm objective).
  Eigen::RowVectorXd row0(8), row1(8), row2(8);
  row0 << -1.4563094201444571, 0.81031966232486918, 20.71548413304, 0, 0,
      20.71548413304, 0, 0;
  row1 << -2.7289297332620821, -0.73950757841468062, 0, 0, 20.715484133040004,
      0, 0, 0;
  row2 << 20.71548413304, 0, -1.509193338482965, -0.31612571404211542, 0, 0,
      20.71548413304, 0;
  EXPECT_LT((o.L.row(0) - row0).norm(), 1e-8);
  EXPECT_LT((o.L.row(1) - row1).norm(), 1e-8);
  EXPECT_LT((o.L.row(2) - row2).norm(), 1e-8);
  EXPECT_LT((o.L - feedforward_gain(o.regulator.U, o.are.K, o.regulator.X))
                .norm(),
            1e-12);
}

TEST(Regulator, PicksMinimumObjectiveAmongSolutions) {
  // Two inputs drive one state: U is free along a line.
  const Matrix a = scalar(-1);
  Matrix b(1, 2);
  b << 1, 1;
  const Matrix c = scalar(1), d = scalar(0), e = scalar(0), f = scalar(-2);
  const Matrix qbar = scalar(1);
  Matrix rbar(2, 2);
  rbar << 1, 0, 0, 3;
  const RegulatorSolution s = solve_regulator(a, b, c, d, e, f, qbar, rbar);
  EXPECT_FALSE(s.unique);
  EXPECT_NEAR(s.X(0, 0), 2.0, 1e-12);
  EXPECT_NEAR(s.U.sum(), 2.0, 1e-12);
  // Minimizer of u1^2 + 3 u2^2 with u1 + u2 = 2.
  EXPECT_NEAR(s.U(0, 0), 1.5, 1e-10);
  EXPECT_NEAR(s.U(1, 0), 0.5, 1e-10);
  for (double t : {-0.3, 0.1, 0.7}) {
    Matrix u = s.U;
    u(0, 0) += t;
    u(1, 0) -= t;
    EXPECT_GT(regulator_objective(s.X, u, qbar, rbar), s.objective);
  }
}

TEST(Regulator, DefaultPlantFailsRankCondition) {
  const ScenarioConfig c;
  const PlantModel p = c.plant();
  try {
    solve_regulator(p.A, p.B, p.C, p.D, p.E, p.F, c.Qbar, c.Rbar);
    FAIL() << "expected AssumptionViolated";
  } catch (const AssumptionViolated& e) {
    EXPECT_NE(std::string(e.what()).find("< 9"), std::string::npos) << e.what();
  }
}

TEST(Regulator, RejectsBadWeightsAndShapes) {
  EXPECT_THROW(solve_regulator(scalar(0), scalar(1), scalar(1), scalar(0),
                               scalar(0), scalar(-1), scalar(-1), scalar(1)),
               AssumptionViolated);
  EXPECT_THROW(solve_regulator(scalar(0), scalar(1), scalar(1),
                               Matrix::Zero(2, 1), scalar(0), scalar(-1),
                               scalar(1), scalar(1)),
               std::invalid_argument);
  EXPECT_THROW(feedforward_gain(scalar(1), Matrix::Zero(1, 2), scalar(1)),
               std::invalid_argument);
}

}  // namespace
}  // namespace ddvi
