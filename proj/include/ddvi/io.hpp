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

#ifndef DDVI_IO_HPP_
#define DDVI_IO_HPP_

#include <string>
#include <utility>
#include <vector>

#include "ddvi/linops.hpp"
#include "ddvi/riccati.hpp"
#include "ddvi/runner.hpp"
#include "ddvi/sim.hpp"

namespace ddvi {

/// Ordered, labeled matrices. Text form, one block per matrix:
///   K 3 6
///   <row> ... (space separated, %.17g)
struct GainSet {
  std::vector<std::pair<std::string, Matrix>> blocks;

  const Matrix* find(const std::string& name) const;
  const Matrix& at(const std::string& name) const;  // throws ConfigError
  void set(const std::string& name, Matrix m);
};

GainSet gains_from(const LearnedPolicy& policy);
GainSet gains_from(const OracleGains& oracle);

std::string format_gains(const GainSet& gains);
GainSet parse_gains(const std::string& text);
void write_gains(const std::string& path, const GainSet& gains);
/// Missing file -> ConfigError.
GainSet read_gains(const std::string& path);

inline constexpr const char* kTrajectoryHeader =
    "t_s,x_km,y_km,z_km,xdot_kms,ydot_kms,zdot_kms,u1,u2,u3,e1_km,e2_km,e3_km";

/// Every stride-th sample plus the last one.
void write_trajectory_csv(const std::string& path, const Trajectory& traj,
                          long stride = 1);
void write_trace_csv(const std::string& path, const ViTrace& trace);
std::string format_summary(const Comparison& cmp);
void write_summary(const std::string& path, const Comparison& cmp);

/// Creates the directory (and parents); IoError on failure.
void ensure_directory(const std::string& dir);

}  // namespace ddvi

#endif  // DDVI_IO_HPP_
