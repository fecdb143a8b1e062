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

#include "ddvi/riccati.hpp"

#include <gtest/gtest.h>

#include <cmath>

#include "ddvi/errors.hpp"
#include "test_support.hpp"

namespace ddvi {
namespace {

using testing::rel_err;

Matrix scalar(double x) { return Matrix::Constant(1, 1, x); }

struct Bench {
  Matrix a, b, q, r;
};

Bench bench() {
  const ScenarioConfig c = testing::benchmark_config();
  const PlantModel p = c.plant();
  return {p.A, p.B, c.Q, c.R};
}

// scipy.linalg.solve_continuous_are on the benchmark plant.
Matrix scipy_gain() {
  Matrix k(3, 6);
  k << 4.330629020609495, -1.078266323339058, 0, 2.6794666101418874,
      0.6233026372025285, 0,  //
      2.940579563261978, 0.4871773146944278, 0, 0.6233026372025285,
      2.116498299998959, 0,  //
      0, 0, 0.549193338482965, 0, 0, 1.580628570210577;
  return k;
}

TEST(Are, ScalarCases) {
  AreSolution s = solve_are_exact(scalar(0), scalar(1), scalar(1), scalar(1));
  EXPECT_NEAR(s.P(0, 0), 1.0, 1e-12);
  EXPECT_NEAR(s.K(0, 0), 1.0, 1e-12);
  s = solve_are_exact(scalar(-1), scalar(1), scalar(1), scalar(1));
  EXPECT_NEAR(s.P(0, 0), std::sqrt(2.0) - 1.0, 1e-12);
}

TEST(Are, BenchmarkMatchesIndependentSolver) {
  const Bench p = bench();
  const AreSolution s = solve_are_exact(p.a, p.b, p.q, p.r);
  EXPECT_LE(s.residual, 1e-8);
  EXPECT_TRUE(is_hurwitz(p.a - p.b * s.K));
  EXPECT_TRUE(s.P.is_positive_definite());
  EXPECT_LT(rel_err(s.K, scipy_gain()), 1e-10);
  EXPECT_NEAR(s.P(0, 0), 11.273967021412687, 1e-9);
  EXPECT_NEAR(s.P(0, 1), -1.6111650758043201, 1e-9);
}

TEST(Are, RejectsUnstabilizablePair) {
  Matrix a(2, 2);
  a << 0, 1, -1, 0;
  EXPECT_THROW(solve_are_exact(a, Matrix::Zero(2, 1), Matrix::Identity(2, 2),
                               scalar(1)),
               AssumptionViolated);
  EXPECT_THROW(solve_are_exact(scalar(0), scalar(1), scalar(1), scalar(-1)),
               AssumptionViolated);
}

TEST(Are, DefaultPlantFailsStabilizabilityTolerance) {
  const ScenarioConfig c;
  const PlantModel p = c.plant();
  try {
    solve_are_exact(p.A, p.B, c.Q, c.R);
    FAIL() << "expected AssumptionViolated";
  } catch (const AssumptionViolated& e) {
    EXPECT_NE(std::string(e.what()).find("stabilizable"), std::string::npos);
  }
}

TEST(Lyapunov, SolvesKroneckerSystem) {
  const Matrix a = -testing::random_spd(5, 9);
  const Matrix q = testing::random_spd(5, 10);
  const Matrix p = solve_lyapunov(a, q);
  EXPECT_LT((a.transpose() * p + p * a + q).norm(), 1e-10 * q.norm());
}

TEST(Kleinman, ScalarConvergesInOneStep) {
  const KleinmanResult r =
      kleinman_pi(scalar(0), scalar(1), scalar(1), scalar(1), scalar(1));
  ASSERT_FALSE(r.values.empty());
  EXPECT_NEAR(r.values.front()(0, 0), 1.0, 1e-12);
  EXPECT_NEAR(r.solution.K(0, 0), 1.0, 1e-12);
}

TEST(Kleinman, MonotoneAndMatchesDirectSolve) {
  const Bench p = bench();
  const AreSolution exact = solve_are_exact(p.a, p.b, p.q, p.r);
  const Matrix k0 = solve_are_exact(p.a, p.b, 10.0 * p.q, p.r).K;
  ASSERT_TRUE(is_hurwitz(p.a - p.b * k0));
  const KleinmanResult r = kleinman_pi(p.a, p.b, p.q, p.r, k0);
  ASSERT_GE(r.values.size(), 2u);
  const double tol = 1e-9 * exact.P.matrix().norm();
  for (std::size_t k = 0; k < r.values.size(); ++k) {
    EXPECT_TRUE(is_hurwitz(p.a - p.b * r.gains[k]));
    EXPECT_GE(SymMatrix(r.values[k].matrix() - exact.P.matrix(), 1e-6)
                  .min_eigenvalue(),
              -tol);
    if (k > 0) {
      EXPECT_GE(SymMatrix(r.values[k - 1].matrix() - r.values[k].matrix(), 1e-6)
                    .min_eigenvalue(),
                -tol);
    }
  }
  EXPECT_LT(rel_err(r.solution.P.matrix(), exact.P.matrix()), 1e-6);
  EXPECT_LT(rel_err(r.solution.K, exact.K), 1e-6);
}

TEST(Kleinman, RejectsNonStabilizingSeed) {
  const Bench p = bench();
  EXPECT_THROW(kleinman_pi(p.a, p.b, p.q, p.r, Matrix::Zero(3, 6)),
               AssumptionViolated);
}

TEST(Schedule, StepSizesAndBounds) {
  ViSchedule s;
  EXPECT_EQ(s.epsilon(0), 1.0);
  EXPECT_EQ(s.epsilon(9), 0.1);
  EXPECT_EQ(s.bound(0), 10.0);
  EXPECT_EQ(s.bound(2), 30.0);
  s.fixed_bound = 7.0;
  EXPECT_EQ(s.bound(5), 7.0);
  EXPECT_NO_THROW(s.validate());
}

TEST(Schedule, RejectsSummableSteps) {
  ViSchedule s;
  s.step_exponent = 1.5;
  EXPECT_THROW(s.validate(), ConfigError);
  s.step_exponent = 1.0;
  s.step_scale = 0.0;
  EXPECT_THROW(s.validate(), ConfigError);
  s.step_scale = 1.0;
  s.p0 = SymMatrix(-Matrix::Identity(2, 2));
  EXPECT_THROW(s.validate(), ConfigError);
}

TEST(ModelVi, ScalarFixedPoint) {
  ViSchedule s;
  s.p0 = SymMatrix(scalar(2));
  const ViResult r = model_based_vi(scalar(0), scalar(1), scalar(1), scalar(1), s);
  EXPECT_NEAR(r.solution.P(0, 0), 1.0, 1e-5);
}

TEST(ModelVi, RandomInitialValuesReachOracle) {
  const Bench p = bench();
  const AreSolution exact = solve_are_exact(p.a, p.b, p.q, p.r);
  for (unsigned seed = 1; seed <= 10; ++seed) {
    ViSchedule s;
    s.p0 = SymMatrix(testing::random_spd(6, seed, 0.1));
    const ViResult r = model_based_vi(p.a, p.b, p.q, p.r, s);
    EXPECT_LE(rel_err(r.solution.P.matrix(), exact.P.matrix()), 1e-3) << seed;
  }
}

TEST(ModelVi, MetricDecreasesOverTail) {
  const Bench p = bench();
  const ViResult r = model_based_vi(p.a, p.b, p.q, p.r, ViSchedule{});
  const auto& e = r.trace.entries;
  ASSERT_GT(e.size(), 10u);
  const std::size_t mid = e.size() / 2;
  EXPECT_LT(e.back().metric, e[mid].metric);
  EXPECT_LT(e[mid].metric, e[10].metric);
  EXPECT_LT(e.back().metric, ViSchedule{}.threshold);
}

TEST(ModelVi, FixedBoundAboveOptimumNeverResetsLate) {
  const Bench p = bench();
  const AreSolution exact = solve_are_exact(p.a, p.b, p.q, p.r);
  ViSchedule s;
  s.fixed_bound = 2.0 * sym_norm2(exact.P.matrix());
  const ViResult r = model_based_vi(p.a, p.b, p.q, p.r, s);
  long last_reset = -1;
  for (const auto& e : r.trace.entries) {
    if (e.reset) last_reset = e.k;
  }
  EXPECT_LT(last_reset, 100);
  EXPECT_LE(rel_err(r.solution.P.matrix(), exact.P.matrix()), 1e-3);
}

TEST(ModelVi, IterationCapRaisesNotConverged) {
  const Bench p = bench();
  ViSchedule s;
  s.max_iterations = 50;
  EXPECT_THROW(model_based_vi(p.a, p.b, p.q, p.r, s), NotConverged);
}

}  // namespace
}  // namespace ddvi
