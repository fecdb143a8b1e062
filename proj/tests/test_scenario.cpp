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

#include "ddvi/scenario.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>

#include <unistd.h>

#include "ddvi/errors.hpp"
#include "test_support.hpp"

namespace ddvi {
namespace {

std::string message_of(const std::string& yaml) {
  try {
    parse_config_string(yaml);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

TEST(Config, DefaultsAreValid) {
  const ScenarioConfig c;
  EXPECT_TRUE(c.violations().empty());
  EXPECT_NEAR(c.beta_chief(), 0.022, 1e-15);
  EXPECT_NEAR(c.sensitivity()(0), 0.088, 1e-15);
  const DragParams d = c.to_drag_params();
  EXPECT_NEAR(d.beta_chief, 0.022e-6, 1e-20);
  EXPECT_NEAR(d.density_chief, 2.2e-11 * 1e9, 1e-12);
  EXPECT_NEAR(d.sensitivity(1), 0.088e-6, 1e-20);
  EXPECT_NEAR(c.horizon(), 217247.0, 1.0);
  EXPECT_EQ(c.initial_state().size(), 6);
}

TEST(Config, EmptyDocumentGivesDefaults) {
  EXPECT_TRUE(parse_config_string("{}") == ScenarioConfig{});
  EXPECT_TRUE(parse_config_string("") == ScenarioConfig{});
}

TEST(Config, WriteParseRoundTrip) {
  ScenarioConfig c = testing::benchmark_config();
  c.schedule.fixed_bound = 123.5;
  c.beta_deputy_m2_kg = 0.025;
  c.output_dir = "some dir/out";
  c.K0(1, 4) = -0.3;
  const ScenarioConfig back = parse_config_string(write_config(c));
  EXPECT_TRUE(back == c);
  EXPECT_EQ(write_config(back), write_config(c));
  EXPECT_TRUE(parse_config_file(testing::source_path("configs/default.yaml")) ==
              ScenarioConfig{});
}

TEST(Config, MatrixForms) {
  const ScenarioConfig c = parse_config_string(
      "cost:\n"
      "  Q: {diag: [1, 2, 3, 4, 5, 6]}\n"
      "  R: [[2, 0, 0], [0, 3, 0], [0, 0, 4]]\n"
      "  Qbar: 2.5\n"
      "collection:\n"
      "  K0: 0\n");
  EXPECT_EQ(c.Q.diagonal(), Vector::LinSpaced(6, 1, 6));
  EXPECT_EQ(c.R(2, 2), 4.0);
  EXPECT_EQ(c.Qbar, 2.5 * Matrix::Identity(6, 6));
  EXPECT_EQ(c.K0, Matrix::Zero(3, 6));
  EXPECT_NE(message_of("collection: {K0: 0.5}\n").find("square"),
            std::string::npos);
}

TEST(Config, RejectsMalformedInput) {
  EXPECT_NE(message_of("plant: {n_bar: 1, typo: 2}\n").find("typo"),
            std::string::npos);
  EXPECT_NE(message_of("bogus: 1\n").find("bogus"), std::string::npos);
  EXPECT_NE(message_of("cost: {R: [[1, 0], [0, 1]]}\n").find("cost"),
            std::string::npos);
  EXPECT_NE(message_of("plant: {n_bar: abc}\n").find("n_bar"),
            std::string::npos);
  EXPECT_NE(message_of("plant: {input_model: thrusters}\n").find("input_model"),
            std::string::npos);
  EXPECT_FALSE(message_of("plant: [1, 2\n").empty());
  EXPECT_THROW(parse_config_file("/nonexistent/ddvi.yaml"), ConfigError);
}

TEST(Config, ReportsEveryViolation) {
  const std::string msg = message_of(
      "collection: {windows: 50}\n"
      "cost: {R: -1}\n"
      "simulation: {dt_s: 0.3}\n");
  EXPECT_NE(msg.find("collection.windows = 50 is below the minimum of 87"),
            std::string::npos)
      << msg;
  EXPECT_NE(msg.find("cost.R"), std::string::npos);
  EXPECT_NE(msg.find("multiple of dt_s"), std::string::npos);
  ScenarioConfig c;
  c.learn_end_periods = 50.0;
  c.schedule.step_exponent = 2.0;
  EXPECT_EQ(c.violations().size(), 2u);
}

TEST(Config, KeplerWarningOnlyWithoutExplicitPeriod) {
  ScenarioConfig c;
  ASSERT_EQ(c.warnings().size(), 1u);
  EXPECT_NE(c.warnings()[0].find("Kepler"), std::string::npos);
  c.n_bar = std::sqrt(kEarthMuKm3s2 / std::pow(c.chief.semi_major_axis_km, 3));
  EXPECT_TRUE(c.warnings().empty());
  c.n_bar = 0.002;
  EXPECT_EQ(c.warnings().size(), 1u);
  c.period_s = 5000.0;
  EXPECT_TRUE(c.warnings().empty());
  EXPECT_EQ(c.period(), 5000.0);
  EXPECT_TRUE(testing::benchmark_config().warnings().empty());
}

TEST(Config, OutputDirectoryResolution) {
  ScenarioConfig c;
  ::unsetenv(kOutputDirEnv);
  EXPECT_EQ(c.resolved_output_dir(), "ddvi_out");
  ::setenv(kOutputDirEnv, "/tmp/from_env", 1);
  EXPECT_EQ(c.resolved_output_dir(), "/tmp/from_env");
  c.output_dir = "explicit";
  EXPECT_EQ(c.resolved_output_dir(), "explicit");
  ::unsetenv(kOutputDirEnv);
}

TEST(Config, SaveReportsIoFailure) {
  EXPECT_THROW(save_config(ScenarioConfig{}, "/nonexistent/dir/c.yaml"),
               IoError);
  const auto path = std::filesystem::temp_directory_path() /
                    ("ddvi_cfg_" + std::to_string(::getpid()) + ".yaml");
  save_config(testing::benchmark_config(), path.string());
  EXPECT_TRUE(parse_config_file(path.string()) == testing::benchmark_config());
  std::filesystem::remove(path);
}

TEST(Config, PlantFollowsSettings) {
  ScenarioConfig c;
  c.drag_enabled = false;
  const PlantModel p = c.plant();
  EXPECT_EQ(p.B.norm(), 0.0);
  c = testing::benchmark_config();
  const PlantModel b = c.plant();
  EXPECT_EQ(b.B.bottomRows(3), Matrix::Identity(3, 3));
  EXPECT_EQ(b.n_bar, 1.0);
}

}  // namespace
}  // namespace ddvi
