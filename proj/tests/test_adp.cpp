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

#include "ddvi/adp.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "ddvi/errors.hpp"
#include "test_support.hpp"

namespace ddvi {
namespace {

using testing::rel_err;

// Scalar plant with a two-dimensional exosystem; x = sin t, u = cos t.
Trajectory analytic_trajectory(double dt, double horizon) {
  const auto steps = static_cast<Eigen::Index>(std::llround(horizon / dt));
  Trajectory tr;
  tr.x.resize(1, steps + 1);
  tr.u.resize(1, steps + 1);
  tr.v = Matrix::Zero(2, steps + 1);
  tr.e = Matrix::Zero(1, steps + 1);
  for (Eigen::Index i = 0; i <= steps; ++i) {
    const double t = static_cast<double>(i) * dt;
    tr.t.push_back(t);
    tr.x(0, i) = std::sin(t);
    tr.u(0, i) = std::cos(t);
  }
  return tr;
}

TEST(XjBasis, ShapesAndConstraints) {
  const PlantModel p = testing::benchmark_config().plant();
  const XjBasis b = build_xj_basis(p.C, p.F);
  const Eigen::Index h = (p.n() - p.p()) * p.q();
  EXPECT_EQ(b.null_dim, h);
  ASSERT_EQ(b.size(), static_cast<std::size_t>(h + 2));
  EXPECT_EQ(b.X[0].norm(), 0.0);
  EXPECT_LT((p.C * b.X[1] + p.F).norm(), 1e-12);
  Matrix stacked(p.n() * p.q(), h);
  for (Eigen::Index j = 0; j < h; ++j) {
    EXPECT_LT((p.C * b.X[j + 2]).norm(), 1e-12);
    stacked.col(j) = vec(b.X[j + 2]);
  }
  EXPECT_EQ(numerical_rank(stacked), h);
  EXPECT_LT((stacked.transpose() * stacked -
             Matrix::Identity(h, h)).norm(), 1e-12);
}

TEST(XjBasis, SmallExample) {
  Matrix c(1, 2);
  c << 1, 0;
  const Matrix f = Matrix::Constant(1, 1, -3.0);
  const XjBasis b = build_xj_basis(c, f);
  ASSERT_EQ(b.size(), 3u);
  EXPECT_NEAR(b.X[1](0, 0), 3.0, 1e-12);
  EXPECT_NEAR(b.X[1](1, 0), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(b.X[2](1, 0)), 1.0, 1e-12);
  EXPECT_THROW(build_xj_basis(Matrix::Zero(1, 2), f), RankDeficient);
}

TEST(Accumulate, ConstantStateIntegratesExactly) {
  Trajectory tr = analytic_trajectory(0.1, 10.0);
  tr.x.setConstant(2.0);
  tr.u.setConstant(-1.0);
  const WindowSpec spec{1.0, 10, 0};
  const DataLog log = accumulate(tr, Matrix::Zero(1, 2), spec);
  ASSERT_EQ(log.windows(), 10);
  ASSERT_EQ(log.boundaries.size(), 11u);
  for (long i = 0; i < 10; ++i) {
    EXPECT_NEAR(log.ixx(i, 0), 4.0, 1e-12);
    EXPECT_NEAR(log.gxu(i, 0), -2.0, 1e-12);
    EXPECT_NEAR(log.dxx(i, 0), 0.0, 1e-12);
    EXPECT_NEAR(log.boundaries[i + 1] - log.boundaries[i], 1.0, 1e-12);
  }
}

TEST(Accumulate, TrapezoidIsSecondOrder) {
  auto error = [](double dt) {
    const Trajectory tr = analytic_trajectory(dt, 2.0);
    const DataLog log = accumulate(tr, Matrix::Zero(1, 2), WindowSpec{1.0, 2, 0});
    // Second window [1, 2].
    const double ixx = 0.5 * (1.0 - (std::sin(4.0) - std::sin(2.0)) / 2.0) / 1.0;
    const double gxu = 0.5 * (std::sin(2.0) * std::sin(2.0) -
                              std::sin(1.0) * std::sin(1.0));
    EXPECT_NEAR(log.dxx(1, 0), std::sin(2.0) * std::sin(2.0) -
                                   std::sin(1.0) * std::sin(1.0),
                1e-12);
    return std::abs(log.ixx(1, 0) - ixx) + std::abs(log.gxu(1, 0) - gxu);
  };
  const double order = std::log2(error(0.02) / error(0.01));
  EXPECT_GT(order, 1.9);
  EXPECT_LT(order, 2.1);
}

TEST(Accumulate, RejectsBadWindows) {
  const Trajectory tr = analytic_trajectory(0.1, 5.0);
  EXPECT_THROW(accumulate(tr, Matrix::Zero(1, 2), WindowSpec{0.25, 4, 0}),
               ConfigError);
  EXPECT_THROW(accumulate(tr, Matrix::Zero(1, 2), WindowSpec{1.0, 6, 0}),
               ConfigError);
  Trajectory blown = analytic_trajectory(0.1, 3.0);
  blown.blowup_time = 3.1;
  EXPECT_THROW(accumulate(blown, Matrix::Zero(1, 2), WindowSpec{1.0, 4, 0}),
               NumericalError);
}

TEST(Adp, BenchmarkRankConditionHolds) {
  const LearnResult& r = testing::benchmark_learned();
  ASSERT_FALSE(r.policy.ranks.empty());
  for (long rank : r.policy.ranks) EXPECT_EQ(rank, 87);
}

TEST(Adp, RankFailsWithoutExcitation) {
  ScenarioConfig c = testing::benchmark_config();
  c.noise.amplitude = 0.0;
  const PlantModel p = c.plant();
  const Trajectory tr = collect(p, c);
  const DataLog log = accumulate(tr, Matrix::Zero(6, 8), c.window_spec());
  const RankCheck rc = check_rank(log);
  EXPECT_FALSE(rc.full);
  EXPECT_EQ(rc.required, 87);
  EXPECT_LT(rc.rank, 87);
  EXPECT_THROW(learn(c), RankDeficient);
}

TEST(Adp, RankFailsWithTooFewWindows) {
  const ScenarioConfig c = testing::benchmark_config();
  const DataLog log = accumulate(testing::benchmark_learned().collection,
                                 Matrix::Zero(6, 8), WindowSpec{0.5, 60, 0});
  const RankCheck rc = check_rank(log);
  EXPECT_FALSE(rc.full);
  EXPECT_LE(rc.rank, 60);
  EXPECT_THROW(DataEquation(log, c.R, 6, 8), RankDeficient);
}

TEST(Adp, ExactDataIdentityAtOptimalValue) {
  const ScenarioConfig c = testing::benchmark_config();
  const PlantModel p = c.plant();
  const OracleGains& o = testing::benchmark_oracle();
  const DataLog log = accumulate(testing::benchmark_learned().collection,
                                 Matrix::Zero(6, 8), c.window_spec());
  const DataEquation eq(log, c.R, 6, 8);
  EXPECT_EQ(eq.rank(), 87);
  const DataEquation::Solution s = eq.solve(o.are.P);
  const Matrix h = p.A.transpose() * o.are.P.matrix() + o.are.P.matrix() * p.A;
  EXPECT_LT(rel_err(s.H.matrix(), h), 1e-4);
  EXPECT_LT(rel_err(s.K, o.are.K), 1e-4);
  EXPECT_LT(rel_err(s.W, p.D.transpose() * o.are.P.matrix()), 1e-4);
  EXPECT_LT(eq.relative_residual(o.are.P), 1e-4);
}

TEST(Adp, ZeroStepLeavesValueUnchanged) {
  const ScenarioConfig c = testing::benchmark_config();
  const DataLog log = accumulate(testing::benchmark_learned().collection,
                                 Matrix::Zero(6, 8), c.window_spec());
  const DataEquation eq(log, c.R, 6, 8);
  const SymMatrix p(testing::random_spd(6, 3));
  const ViDataStep s = vi_data_step(eq, p, c.Q, c.R, 0.0, 1e6,
                                    SymMatrix::Identity(6));
  EXPECT_FALSE(s.reset);
  EXPECT_EQ((s.P.matrix() - p.matrix()).norm(), 0.0);
  const ViDataStep out = vi_data_step(eq, p, c.Q, c.R, 1.0, 1e-3,
                                      SymMatrix::Identity(6));
  EXPECT_TRUE(out.reset);
  EXPECT_EQ(out.P.matrix(), Matrix::Identity(6, 6));
}

TEST(Adp, LearnedGainsMatchOracle) {
  const LearnedPolicy& lp = testing::benchmark_learned().policy;
  const OracleGains& o = testing::benchmark_oracle();
  EXPECT_LT(rel_err(lp.P.matrix(), o.are.P.matrix()), 1e-3);
  EXPECT_LT(rel_err(lp.K, o.are.K), 1e-3);
  EXPECT_LT(rel_err(lp.L, o.L), 1e-3);
  EXPECT_LT(rel_err(lp.X, o.regulator.X), 1e-2);
  EXPECT_LT(rel_err(lp.U, o.regulator.U), 1e-2);
  EXPECT_EQ(lp.trace.theta_assemblies, 1);
}

TEST(Adp, RecoversPlantMatricesFromData) {
  const LearnedPolicy& lp = testing::benchmark_learned().policy;
  const PlantModel p = testing::benchmark_config().plant();
  EXPECT_LT(rel_err(lp.B_hat, p.B), 0.05);
  ASSERT_GT(p.D.norm(), 0.0);
  EXPECT_LT(rel_err(lp.D_hat, p.D), 0.05);
  const XjBasis b = build_xj_basis(p.C, p.F);
  for (std::size_t j = 1; j < b.size(); j += 5) {
    const Matrix s = b.X[j] * p.E - p.A * b.X[j];
    EXPECT_LT((lp.S[j] - s).norm(), 0.05 * (1.0 + s.norm())) << j;
  }
}

TEST(Adp, OffPolicyLearningIgnoresBehaviourGain) {
  ScenarioConfig c = testing::benchmark_config();
  c.K0 = testing::bounded_random_gain(c, 0.05, 17);
  ASSERT_GT(c.K0.norm(), 0.0);
  const LearnResult r = learn(c);
  const OracleGains& o = testing::benchmark_oracle();
  EXPECT_LT(rel_err(r.policy.K, o.are.K), 1e-3);
  EXPECT_LT(rel_err(r.policy.L, o.L), 1e-3);
}

TEST(ExplorationNoise, DeterministicAndBounded) {
  NoiseSpec spec;
  spec.sinusoids_per_axis = 20;
  const ExplorationNoise a(spec), b(spec);
  EXPECT_EQ(a.frequencies(), b.frequencies());
  EXPECT_DOUBLE_EQ(a.bound(), 20 * spec.amplitude);
  for (double t : {0.0, 1.5, 1234.5}) {
    const Vector va = a(t);
    EXPECT_EQ(va, b(t));
    EXPECT_LE(va.cwiseAbs().maxCoeff(), a.bound());
  }
  for (Eigen::Index i = 0; i < spec.axes; ++i) {
    std::set<double> seen;
    for (Eigen::Index k = 0; k < a.frequencies().cols(); ++k) {
      const double w = a.frequencies()(i, k);
      EXPECT_GE(w, spec.omega_min);
      EXPECT_LE(w, spec.omega_max);
      EXPECT_TRUE(seen.insert(w).second);
    }
  }
  spec.seed = 2;
  EXPECT_NE(ExplorationNoise(spec).frequencies(), a.frequencies());
  spec.sinusoids_per_axis = 0;
  EXPECT_THROW(ExplorationNoise{spec}, ConfigError);
}

}  // namespace
}  // namespace ddvi
