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

#ifndef DDVI_SCENARIO_HPP_
#define DDVI_SCENARIO_HPP_

#include <optional>
#include <string>
#include <vector>

#include "ddvi/adp.hpp"
#include "ddvi/cw_plant.hpp"
#include "ddvi/riccati.hpp"

namespace ddvi {

inline constexpr const char* kOutputDirEnv = "DDVI_OUTPUT_DIR";

/// Everything a run needs. Physical parameters are kept in the units used
/// by the config file (m, m^2, kg/m^3); to_drag_params converts to km.
struct ScenarioConfig {
  // plant
  double n_bar = 0.00108;
  bool j2_enabled = true;
  double j2 = kEarthJ2;
  double earth_radius_km = kEarthRadiusKm;
  double reference_radius_km = kEarthRadiusKm;
  InputModel input_model = InputModel::kDragSensitivity;
  Eigen::Vector3d reference_velocity_kms = Eigen::Vector3d::Zero();
  double direct_gain = 1.0;

  OrbitalElements chief{6678.136, 45.0, 20.0, 30.0, 20.0};
  OrbitalElements deputy{6678.376, 45.0, 20.0, 30.0, 19.75};

  // drag (config units)
  bool drag_enabled = true;
  double mass_kg = 6.0;
  double facet_area_m2 = 0.06;
  double drag_coefficient = 2.2;
  Eigen::Vector3d facet_normal = Eigen::Vector3d::UnitX();
  double density_chief_kg_m3 = 2.2e-11;
  std::optional<double> density_deputy_kg_m3;  // defaults to chief
  std::optional<double> beta_chief_m2_kg;      // defaults to C_D A / m
  std::optional<double> beta_deputy_m2_kg;
  double scale_height_km = 60.0;
  double chief_radius_km = 300.0;
  std::optional<Eigen::RowVector3d> sensitivity_m2_kg;  // 4 C_D A / m [1,1,1]

  // cost
  Matrix Q = 1.4 * Matrix::Identity(6, 6);
  Matrix R = 1e7 * Matrix::Identity(3, 3);
  Matrix Qbar = Matrix::Identity(6, 6);
  Matrix Rbar = Matrix::Identity(3, 3);

  ViSchedule schedule;

  // simulation
  double horizon_periods = 40.0;
  double learn_end_periods = 15.0;
  double dt_s = 1.0;
  std::optional<double> period_s;  // Kepler period of the chief when unset
  double settle_tolerance_km = 1e-3;
  double state_cap_km = 1e4;
  std::optional<Vector> x0;  // Hill state from the element tables when unset
  Vector v0 = (Vector(8) << 1, 0, 1, 0, 1, 0, 1, 0).finished();

  // collection
  double window_s = 5.0;
  long windows = 120;
  Matrix K0 = Matrix::Zero(3, 6);
  NoiseSpec noise;

  // output
  std::optional<std::string> output_dir;
  long trajectory_stride = 10;

  double beta_chief() const;
  double beta_deputy() const;
  double density_deputy() const;
  Eigen::RowVector3d sensitivity() const;
  DragParams to_drag_params() const;  // km / kg / s
  J2Params to_j2_params() const;
  InputSpec to_input_spec() const;
  PlantModel plant() const;

  double period() const;
  double horizon() const { return horizon_periods * period(); }
  double learn_end() const { return learn_end_periods * period(); }
  Vector initial_state() const;
  WindowSpec window_spec() const { return {window_s, windows, 0}; }
  std::string resolved_output_dir() const;

  /// Every violated invariant, empty when valid.
  std::vector<std::string> violations() const;
  /// Non-fatal inconsistencies (e.g. n_bar vs. Kepler mean motion).
  std::vector<std::string> warnings() const;
  /// Throws ConfigError listing every violation.
  void validate() const;
};

/// Missing file -> ConfigError; parse error -> ConfigError with position.
ScenarioConfig parse_config_file(const std::string& path);
ScenarioConfig parse_config_string(const std::string& text);
std::string write_config(const ScenarioConfig& config);
void save_config(const ScenarioConfig& config, const std::string& path);

bool operator==(const ScenarioConfig& a, const ScenarioConfig& b);

}  // namespace ddvi

#endif  // DDVI_SCENARIO_HPP_
