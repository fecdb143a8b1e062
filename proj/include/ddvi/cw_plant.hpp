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

#ifndef DDVI_CW_PLANT_HPP_
#define DDVI_CW_PLANT_HPP_

#include <array>
#include <complex>
#include <span>
#include <string>
#include <vector>

#include "ddvi/linops.hpp"

namespace ddvi {

inline constexpr double kEarthRadiusKm = 6378.136;
inline constexpr double kEarthMuKm3s2 = 398600.4418;
inline constexpr double kEarthJ2 = 1.08263e-3;

struct OrbitalElements {
  double semi_major_axis_km = 0.0;
  double inclination_deg = 0.0;
  double raan_deg = 0.0;
  double arg_perigee_deg = 0.0;
  double true_anomaly_deg = 0.0;

  void validate(const std::string& label) const;
};

// A flat drag facet. Area units are whatever the caller uses for the
// ballistic coefficient (the sensitivity comes out in area/kg).
struct Facet {
  double area = 0.0;
  double drag_coefficient = 0.0;
  Eigen::Vector3d normal = Eigen::Vector3d::UnitX();
};

// Drag model in internal units: km, kg, s.
struct DragParams {
  Eigen::RowVector3d sensitivity = Eigen::RowVector3d::Zero();  // km^2/kg
  double beta_chief = 0.0;      // km^2/kg
  double beta_deputy = 0.0;     // km^2/kg
  double density_chief = 0.0;   // kg/km^3
  double density_deputy = 0.0;  // kg/km^3
  double scale_height = 60.0;   // km
  double chief_radius = 300.0;  // km
  std::vector<Facet> facets;
  double mass = 6.0;  // kg

  void validate() const;
  /// beta_d * P_d * r_c, dimensionless.
  double deputy_drag_factor() const {
    return beta_deputy * density_deputy * chief_radius;
  }
};

/// Schweighart-Sedwick J2 correction for the CW equations.
struct J2Params {
  double j2 = kEarthJ2;
  double earth_radius = kEarthRadiusKm;      // km
  double reference_radius = kEarthRadiusKm;  // km
  double inclination = 0.0;                  // rad

  double s() const;
  double c() const;
};

enum class InputModel {
  kDragSensitivity,          // only the ydot-dot row, as in the baseline model
  kDragSensitivityExtended,  // also xddot/zddot rows at a reference velocity
  kDirect,                   // B = [0; gain * I3]
};

struct InputSpec {
  InputModel model = InputModel::kDragSensitivity;
  Eigen::Vector3d reference_velocity = Eigen::Vector3d::Zero();  // km/s
  double direct_gain = 1.0;
};

/// xdot = A x + B u + D v,  vdot = E v,  e = C x + F v.
struct PlantModel {
  Matrix A, B, C, D, E, F;
  double n_bar = 0.0;

  Eigen::Index n() const { return A.rows(); }
  Eigen::Index m() const { return B.cols(); }
  Eigen::Index p() const { return C.rows(); }
  Eigen::Index q() const { return E.rows(); }
  void check_dimensions() const;
};

struct ExoOutput {
  Matrix E, C, F, D;
};

inline constexpr std::array<double, 4> kDefaultExoFrequencies{0.1, 0.2, 0.3,
                                                              0.4};

/// P_c (1 - x/H), or P_c exp(-x/H) when exact is set.
double density_at_offset(double density_chief, double x, double scale_height,
                         bool exact = false);

/// (1/m) sum_i 4 C_D,i A_i n_i^T [q]x for reference direction q.
Eigen::RowVector3d drag_sensitivity(const DragParams& params,
                                    const Eigen::Vector3d& reference);

Matrix build_A(double n_bar, const J2Params& j2, const DragParams& drag);
Matrix build_B(double n_bar, const DragParams& drag,
               const InputSpec& input = {});
ExoOutput build_exo_and_output(
    double n_bar, const J2Params& j2, const DragParams& drag,
    std::span<const double> frequencies = kDefaultExoFrequencies);
PlantModel build_plant(double n_bar, const J2Params& j2, const DragParams& drag,
                       const InputSpec& input = {});

struct ModeRank {
  std::complex<double> lambda;
  long rank = 0;
  long required = 0;
};

/// rank [A - lambda I, B; C, 0] for each lambda in sigma(E).
std::vector<ModeRank> regulator_rank_condition(const Matrix& a, const Matrix& b,
                                               const Matrix& c,
                                               const Matrix& e);

struct AssumptionReport {
  bool stabilizable = false;     // (A, B)
  bool observable = false;       // (C, A)
  bool cost_observable = false;  // (A, sqrt(Q))
  bool regulator_rank = false;   // rank condition at every lambda in sigma(E)
  std::vector<std::complex<double>> unstabilizable_modes;
  std::vector<std::complex<double>> unobservable_modes;
  std::vector<std::complex<double>> cost_unobservable_modes;
  std::vector<ModeRank> regulator_ranks;

  bool all_pass() const {
    return stabilizable && observable && cost_observable && regulator_rank;
  }
  std::string summary() const;
};

AssumptionReport validate_assumptions(const PlantModel& plant, const Matrix& q);

/// Exosystem made of undamped 2x2 rotation blocks [[0, w], [-w, 0]].
class Exosystem {
 public:
  explicit Exosystem(std::vector<double> frequencies);
  /// Recovers the block frequencies; throws if E is not of that form.
  static Exosystem FromMatrix(const Matrix& e, double tol = 1e-12);

  Matrix matrix() const;
  Eigen::Index dim() const {
    return static_cast<Eigen::Index>(2 * frequencies_.size());
  }
  const std::vector<double>& frequencies() const { return frequencies_; }
  /// exp(E dt) v in closed form. Each block's norm is restored exactly.
  Vector advance(const Vector& v, double dt) const;

 private:
  std::vector<double> frequencies_;
};

Vector exo_step(const Matrix& e, const Vector& v, double dt);

}  // namespace ddvi

#endif  // DDVI_CW_PLANT_HPP_
