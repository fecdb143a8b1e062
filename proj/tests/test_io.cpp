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

#include "ddvi/io.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include "ddvi/errors.hpp"
#include "test_support.hpp"

namespace ddvi {
namespace {

namespace fs = std::filesystem;

class IoTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("ddvi_io_" + std::to_string(::getpid()) + "_" +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const {
    return (dir_ / name).string();
  }

  static std::string slurp(const std::string& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  fs::path dir_;
};

TEST_F(IoTest, GainsRoundTripBitExact) {
  GainSet g;
  g.set("K", testing::random_spd(3, 4).leftCols(2) / 3.0);
  g.set("L", Matrix::Constant(1, 4, 0.1));
  g.set("K", Matrix::Constant(2, 2, 1e-300));
  ASSERT_EQ(g.blocks.size(), 2u);
  ensure_directory(dir_.string());
  write_gains(path("g.txt"), g);
  const GainSet back = read_gains(path("g.txt"));
  ASSERT_EQ(back.blocks.size(), 2u);
  EXPECT_EQ(back.at("K"), g.at("K"));
  EXPECT_EQ(back.at("L"), g.at("L"));
  EXPECT_EQ(format_gains(back), format_gains(g));
  EXPECT_THROW(back.at("P"), ConfigError);
}

TEST_F(IoTest, GainsParserRejectsDamage) {
  EXPECT_THROW(parse_gains("K 2 2\n1 2 3\n"), ConfigError);
  EXPECT_THROW(parse_gains("K two 2\n"), ConfigError);
  EXPECT_THROW(parse_gains("K 1 1\n1\nK 1 1\n2\n"), ConfigError);
  EXPECT_THROW(read_gains(path("missing.txt")), ConfigError);
  EXPECT_TRUE(parse_gains("").blocks.empty());
}

TEST_F(IoTest, OracleGainBlocks) {
  const GainSet g = gains_from(testing::benchmark_oracle());
  for (const char* name : {"K", "L", "P", "X", "U"}) {
    EXPECT_NE(g.find(name), nullptr) << name;
  }
  EXPECT_EQ(g.at("L").rows(), 3);
  EXPECT_EQ(g.at("L").cols(), 8);
}

TEST_F(IoTest, TrajectoryCsvStrideKeepsLastRow) {
  Trajectory tr;
  tr.x = Matrix::Zero(6, 7);
  tr.u = Matrix::Zero(3, 7);
  tr.e = Matrix::Zero(3, 7);
  tr.v = Matrix::Zero(8, 7);
  for (int i = 0; i < 7; ++i) {
    tr.t.push_back(0.5 * i);
    tr.x(0, i) = i;
  }
  ensure_directory(dir_.string());
  write_trajectory_csv(path("t.csv"), tr, 3);
  std::istringstream in(slurp(path("t.csv")));
  std::string line;
  std::vector<std::string> lines;
  while (std::getline(in, line)) lines.push_back(line);
  ASSERT_EQ(lines.size(), 4u);
  EXPECT_EQ(lines[0], kTrajectoryHeader);
  EXPECT_EQ(lines[1].substr(0, 4), "0,0,");
  EXPECT_EQ(lines[2].substr(0, 6), "1.5,3,");
  EXPECT_EQ(lines[3].substr(0, 4), "3,6,");
  EXPECT_EQ(std::count(lines[1].begin(), lines[1].end(), ','), 12);
  write_trajectory_csv(path("t2.csv"), tr, 2);
  const std::string t2 = slurp(path("t2.csv"));
  EXPECT_EQ(std::count(t2.begin(), t2.end(), '\n'), 5);
}

TEST_F(IoTest, TraceAndSummaryFormats) {
  ViTrace trace;
  trace.record({0, 1.0, 2.5, 3.0, 0, false});
  trace.record({1, 0.5, 0.25, 1.0, 1, true});
  ensure_directory(dir_.string());
  write_trace_csv(path("trace.csv"), trace);
  EXPECT_EQ(slurp(path("trace.csv")),
            "k,epsilon,metric,value_norm,r,reset\n0,1,2.5,3,0,0\n"
            "1,0.5,0.25,1,1,1\n");

  Comparison cmp;
  cmp.vi.metrics.cost = 2.0;
  cmp.vi.metrics.settling_time = 10.0;
  cmp.lqr.trajectory.blowup_time = 5.0;
  const std::string s = format_summary(cmp);
  EXPECT_EQ(s,
            "branch,cost,terminal_error_km,settling_time_s,max_input,"
            "blowup_time_s\nvi,2,0,10,0,nan\nlqr,0,0,nan,0,5\n");
}

TEST_F(IoTest, WriteFailuresRaiseIoError) {
  EXPECT_THROW(write_gains("/nonexistent/dir/g.txt", GainSet{}), IoError);
  EXPECT_THROW(write_trace_csv("/nonexistent/dir/t.csv", ViTrace{}), IoError);
  ensure_directory(dir_.string());
  std::ofstream(path("file")) << "x";
  EXPECT_THROW(ensure_directory(path("file")), IoError);
  EXPECT_NO_THROW(ensure_directory(path("a/b/c")));
  EXPECT_TRUE(fs::is_directory(path("a/b/c")));
}

}  // namespace
}  // namespace ddvi
