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

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "ddvi/errors.hpp"
#include "ddvi/sim.hpp"

namespace ddvi {

namespace {

constexpr double kM2ToKm2 = 1e-6;
constexpr double kKgM3ToKgKm3 = 1e9;

const char* input_model_name(InputModel m) {
  switch (m) {
    case InputModel::kDragSensitivity:
      return "drag_sensitivity";
    case InputModel::kDragSensitivityExtended:
      return "drag_sensitivity_extended";
    case InputModel::kDirect:
      return "direct";
  }
  return "drag_sensitivity";
}

bool is_psd(const Matrix& m, bool strict) {
  if (m.rows() != m.cols() || m.rows() == 0) return false;
  if ((m - m.transpose()).norm() > 1e-12 * std::max(1.0, m.norm())) {
    return false;
  }
  const double lo = Eigen::SelfAdjointEigenSolver<Matrix>(m).eigenvalues()(0);
  const double tol = 1e-12 * std::max(1.0, m.norm());
  return strict ? lo > tol : lo >= -tol;
}

// ---- reading -------------------------------------------------------------

bool is_map(const YAML::Node& n) { return n.IsDefined() && n.IsMap(); }

class Reader {
 public:
  std::vector<std::string> errors;

  void check_keys(const YAML::Node& node, const std::string& where,
                  std::initializer_list<const char*> allowed) {
    if (!node.IsDefined() || node.IsNull()) return;
    if (!node.IsMap()) {
      errors.push_back(where + ": expected a mapping");
      return;
    }
    std::set<std::string> ok(allowed.begin(), allowed.end());
    for (const auto& kv : node) {
      const std::string key = kv.first.as<std::string>();
      if (!ok.count(key)) {
        errors.push_back(where + ": unknown key '" + key + "'");
      }
    }
  }

  template <typename T>
  void scalar(const YAML::Node& parent, const char* key, const std::string& where,
              T& out) {
    if (!is_map(parent)) return;
    const YAML::Node n = parent[key];
    if (!n.IsDefined() || n.IsNull()) return;
    try {
      out = n.as<T>();
    } catch (const YAML::Exception&) {
      errors.push_back(where + "." + key + ": cannot parse '" + dump(n) + "'");
    }
  }

  template <typename T>
  void optional_scalar(const YAML::Node& parent, const char* key,
                       const std::string& where, std::optional<T>& out) {
    if (!is_map(parent)) return;
    const YAML::Node n = parent[key];
    if (!n.IsDefined()) return;
    if (n.IsNull()) {
      out.reset();
      return;
    }
    T value{};
    scalar(parent, key, where, value);
    out = value;
  }

  // Scalar s -> s I (square) or a zero fill; list of rows; {diag: [...]}.
  bool matrix(const YAML::Node& n, const std::string& where, Eigen::Index rows,
              Eigen::Index cols, Matrix& out) {
    try {
      if (n.IsScalar()) {
        const double s = n.as<double>();
        if (rows == cols) {
          out = s * Matrix::Identity(rows, cols);
        } else if (s == 0.0) {
          out = Matrix::Zero(rows, cols);
        } else {
          errors.push_back(where + ": a nonzero scalar needs a square matrix");
          return false;
        }
        return true;
      }
      if (n.IsMap()) {
        check_keys(n, where, {"diag"});
        const YAML::Node d = n["diag"];
        if (!d.IsSequence() || static_cast<Eigen::Index>(d.size()) != rows ||
            rows != cols) {
          errors.push_back(where + ": diag needs " + std::to_string(rows) +
                           " entries");
          return false;
        }
        out = Matrix::Zero(rows, cols);
        for (Eigen::Index i = 0; i < rows; ++i) out(i, i) = d[i].as<double>();
        return true;
      }
      if (n.IsSequence() && static_cast<Eigen::Index>(n.size()) == rows) {
        Matrix m(rows, cols);
        for (Eigen::Index i = 0; i < rows; ++i) {
          const YAML::Node row = n[i];
          if (!row.IsSequence() ||
              static_cast<Eigen::Index>(row.size()) != cols) {
            errors.push_back(where + ": row " + std::to_string(i) + " needs " +
                             std::to_string(cols) + " entries");
            return false;
          }
          for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = row[j].as<double>();
        }
        out = std::move(m);
        return true;
      }
    } catch (const YAML::Exception&) {
      errors.push_back(where + ": non-numeric matrix entry");
      return false;
    }
    errors.push_back(where + ": expected a scalar, {diag: [...]} or " +
                     std::to_string(rows) + "x" + std::to_string(cols) +
                     " list of rows");
    return false;
  }

  void matrix_field(const YAML::Node& parent, const char* key,
                    const std::string& where, Eigen::Index rows,
                    Eigen::Index cols, Matrix& out) {
    if (!is_map(parent)) return;
    const YAML::Node n = parent[key];
    if (!n.IsDefined() || n.IsNull()) return;
    matrix(n, where + "." + key, rows, cols, out);
  }

  bool vector(const YAML::Node& n, const std::string& where, Vector& out) {
    if (!n.IsSequence()) {
      errors.push_back(where + ": expected a list of numbers");
      return false;
    }
    Vector v(static_cast<Eigen::Index>(n.size()));
    try {
      for (std::size_t i = 0; i < n.size(); ++i) v(i) = n[i].as<double>();
    } catch (const YAML::Exception&) {
      errors.push_back(where + ": non-numeric entry");
      return false;
    }
    out = std::move(v);
    return true;
  }

  template <typename Fixed>
  void fixed_vector(const YAML::Node& parent, const char* key,
                    const std::string& where, Fixed& out) {
    if (!is_map(parent)) return;
    const YAML::Node n = parent[key];
    if (!n.IsDefined() || n.IsNull()) return;
    Vector v;
    if (!vector(n, where + "." + key, v)) return;
    if (v.size() != out.size()) {
      errors.push_back(where + "." + key + ": expected " +
                       std::to_string(out.size()) + " entries");
      return;
    }
    for (Eigen::Index i = 0; i < v.size(); ++i) out(i) = v(i);
  }

  static std::string dump(const YAML::Node& n) {
    YAML::Emitter e;
    e << n;
    return e.c_str();
  }
};

void read_elements(Reader& rd, const YAML::Node& node, const std::string& where,
                   OrbitalElements& el) {
  rd.check_keys(node, where,
                {"semi_major_axis_km", "inclination_deg", "raan_deg",
                 "arg_perigee_deg", "true_anomaly_deg"});
  rd.scalar(node, "semi_major_axis_km", where, el.semi_major_axis_km);
  rd.scalar(node, "inclination_deg", where, el.inclination_deg);
  rd.scalar(node, "raan_deg", where, el.raan_deg);
  rd.scalar(node, "arg_perigee_deg", where, el.arg_perigee_deg);
  rd.scalar(node, "true_anomaly_deg", where, el.true_anomaly_deg);
}

ScenarioConfig from_yaml(const YAML::Node& root) {
  ScenarioConfig c;
  Reader rd;
  if (!root.IsDefined() || root.IsNull()) return c;
  rd.check_keys(root, "config",
                {"plant", "chief", "deputy", "drag", "cost", "schedule",
                 "simulation", "collection", "noise", "output"});
  if (!rd.errors.empty() && !root.IsMap()) {
    throw ConfigError(rd.errors.front());
  }

  const YAML::Node plant = root["plant"];
  rd.check_keys(plant, "plant",
                {"n_bar", "j2_enabled", "j2", "earth_radius_km",
                 "reference_radius_km", "input_model",
                 "reference_velocity_kms", "direct_gain"});
  rd.scalar(plant, "n_bar", "plant", c.n_bar);
  rd.scalar(plant, "j2_enabled", "plant", c.j2_enabled);
  rd.scalar(plant, "j2", "plant", c.j2);
  rd.scalar(plant, "earth_radius_km", "plant", c.earth_radius_km);
  rd.scalar(plant, "reference_radius_km", "plant", c.reference_radius_km);
  if (is_map(plant) && plant["input_model"].IsDefined()) {
    std::string name;
    rd.scalar(plant, "input_model", "plant", name);
    if (name == "drag_sensitivity") {
      c.input_model = InputModel::kDragSensitivity;
    } else if (name == "drag_sensitivity_extended") {
      c.input_model = InputModel::kDragSensitivityExtended;
    } else if (name == "direct") {
      c.input_model = InputModel::kDirect;
    } else {
      rd.errors.push_back("plant.input_model: unknown model '" + name + "'");
    }
  }
  rd.fixed_vector(plant, "reference_velocity_kms", "plant",
                  c.reference_velocity_kms);
  rd.scalar(plant, "direct_gain", "plant", c.direct_gain);

  read_elements(rd, root["chief"], "chief", c.chief);
  read_elements(rd, root["deputy"], "deputy", c.deputy);

  const YAML::Node drag = root["drag"];
  rd.check_keys(drag, "drag",
                {"enabled", "mass_kg", "facet_area_m2", "drag_coefficient",
                 "facet_normal", "density_chief_kg_m3", "density_deputy_kg_m3",
                 "beta_chief_m2_kg", "beta_deputy_m2_kg", "scale_height_km",
                 "chief_radius_km", "sensitivity_m2_kg"});
  rd.scalar(drag, "enabled", "drag", c.drag_enabled);
  rd.scalar(drag, "mass_kg", "drag", c.mass_kg);
  rd.scalar(drag, "facet_area_m2", "drag", c.facet_area_m2);
  rd.scalar(drag, "drag_coefficient", "drag", c.drag_coefficient);
  rd.fixed_vector(drag, "facet_normal", "drag", c.facet_normal);
  rd.scalar(drag, "density_chief_kg_m3", "drag", c.density_chief_kg_m3);
  rd.optional_scalar(drag, "density_deputy_kg_m3", "drag",
                     c.density_deputy_kg_m3);
  rd.optional_scalar(drag, "beta_chief_m2_kg", "drag", c.beta_chief_m2_kg);
  rd.optional_scalar(drag, "beta_deputy_m2_kg", "drag", c.beta_deputy_m2_kg);
  rd.scalar(drag, "scale_height_km", "drag", c.scale_height_km);
  rd.scalar(drag, "chief_radius_km", "drag", c.chief_radius_km);
  if (is_map(drag) && drag["sensitivity_m2_kg"].IsDefined()) {
    if (drag["sensitivity_m2_kg"].IsNull()) {
      c.sensitivity_m2_kg.reset();
    } else {
      Eigen::RowVector3d s = Eigen::RowVector3d::Zero();
      const std::size_t before = rd.errors.size();
      rd.fixed_vector(drag, "sensitivity_m2_kg", "drag", s);
      if (rd.errors.size() == before) c.sensitivity_m2_kg = s;
    }
  }

  const YAML::Node cost = root["cost"];
  rd.check_keys(cost, "cost", {"Q", "R", "Qbar", "Rbar"});
  rd.matrix_field(cost, "Q", "cost", 6, 6, c.Q);
  rd.matrix_field(cost, "R", "cost", 3, 3, c.R);
  rd.matrix_field(cost, "Qbar", "cost", 6, 6, c.Qbar);
  rd.matrix_field(cost, "Rbar", "cost", 3, 3, c.Rbar);

  const YAML::Node sched = root["schedule"];
  rd.check_keys(sched, "schedule",
                {"step_scale", "step_exponent", "ball_base", "fixed_bound",
                 "threshold", "max_iterations", "P0"});
  rd.scalar(sched, "step_scale", "schedule", c.schedule.step_scale);
  rd.scalar(sched, "step_exponent", "schedule", c.schedule.step_exponent);
  rd.scalar(sched, "ball_base", "schedule", c.schedule.ball_base);
  rd.optional_scalar(sched, "fixed_bound", "schedule", c.schedule.fixed_bound);
  rd.scalar(sched, "threshold", "schedule", c.schedule.threshold);
  rd.scalar(sched, "max_iterations", "schedule", c.schedule.max_iterations);
  if (is_map(sched) && sched["P0"].IsDefined() && !sched["P0"].IsNull()) {
    Matrix p0;
    if (rd.matrix(sched["P0"], "schedule.P0", 6, 6, p0)) {
      try {
        c.schedule.p0 = SymMatrix(p0);
      } catch (const std::exception&) {
        rd.errors.push_back("schedule.P0: must be symmetric");
      }
    }
  }

  const YAML::Node sim = root["simulation"];
  rd.check_keys(sim, "simulation",
                {"horizon_periods", "learn_end_periods", "dt_s", "period_s",
                 "settle_tolerance_km", "state_cap_km", "x0", "v0"});
  rd.scalar(sim, "horizon_periods", "simulation", c.horizon_periods);
  rd.scalar(sim, "learn_end_periods", "simulation", c.learn_end_periods);
  rd.scalar(sim, "dt_s", "simulation", c.dt_s);
  rd.optional_scalar(sim, "period_s", "simulation", c.period_s);
  rd.scalar(sim, "settle_tolerance_km", "simulation", c.settle_tolerance_km);
  rd.scalar(sim, "state_cap_km", "simulation", c.state_cap_km);
  if (is_map(sim) && sim["x0"].IsDefined()) {
    if (sim["x0"].IsNull()) {
      c.x0.reset();
    } else {
      Vector x0;
      if (rd.vector(sim["x0"], "simulation.x0", x0)) c.x0 = x0;
    }
  }
  if (is_map(sim) && sim["v0"].IsDefined() && !sim["v0"].IsNull()) {
    rd.vector(sim["v0"], "simulation.v0", c.v0);
  }

  const YAML::Node col = root["collection"];
  rd.check_keys(col, "collection", {"window_s", "windows", "K0"});
  rd.scalar(col, "window_s", "collection", c.window_s);
  rd.scalar(col, "windows", "collection", c.windows);
  rd.matrix_field(col, "K0", "collection", 3, 6, c.K0);

  const YAML::Node noise = root["noise"];
  rd.check_keys(noise, "noise",
                {"sinusoids_per_axis", "amplitude", "omega_min", "omega_max",
                 "seed"});
  rd.scalar(noise, "sinusoids_per_axis", "noise", c.noise.sinusoids_per_axis);
  rd.scalar(noise, "amplitude", "noise", c.noise.amplitude);
  rd.scalar(noise, "omega_min", "noise", c.noise.omega_min);
  rd.scalar(noise, "omega_max", "noise", c.noise.omega_max);
  rd.scalar(noise, "seed", "noise", c.noise.seed);

  const YAML::Node out = root["output"];
  rd.check_keys(out, "output", {"directory", "trajectory_stride"});
  rd.optional_scalar(out, "directory", "output", c.output_dir);
  rd.scalar(out, "trajectory_stride", "output", c.trajectory_stride);

  if (!rd.errors.empty()) {
    std::string msg = "invalid configuration:";
    for (const auto& e : rd.errors) msg += "\n  - " + e;
    throw ConfigError(msg);
  }
  return c;
}

// ---- writing -------------------------------------------------------------

std::string num(double x) {
  if (std::isnan(x)) return ".nan";
  if (std::isinf(x)) return x > 0 ? ".inf" : "-.inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

template <typename Derived>
std::string list(const Eigen::DenseBase<Derived>& v) {
  std::string s = "[";
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i) s += ", ";
    s += num(v(i));
  }
  return s + "]";
}

std::string rows(const Matrix& m) {
  std::string s = "[";
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    if (i) s += ", ";
    s += list(m.row(i));
  }
  return s + "]";
}

std::string opt(const std::optional<double>& x) {
  return x ? num(*x) : "null";
}

std::string quoted(const std::string& s) {
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"' || ch == '\\') out += '\\';
    out += ch;
  }
  return out + "\"";
}

void write_elements(std::ostringstream& os, const char* name,
                    const OrbitalElements& el) {
  os << name << ":\n"
     << "  semi_major_axis_km: " << num(el.semi_major_axis_km) << "\n"
     << "  inclination_deg: " << num(el.inclination_deg) << "\n"
     << "  raan_deg: " << num(el.raan_deg) << "\n"
     << "  arg_perigee_deg: " << num(el.arg_perigee_deg) << "\n"
     << "  true_anomaly_deg: " << num(el.true_anomaly_deg) << "\n";
}

}  // namespace

double ScenarioConfig::beta_chief() const {
  return beta_chief_m2_kg.value_or(drag_coefficient * facet_area_m2 / mass_kg);
}

double ScenarioConfig::beta_deputy() const {
  return beta_deputy_m2_kg.value_or(drag_coefficient * facet_area_m2 /
                                    mass_kg);
}

double ScenarioConfig::density_deputy() const {
  return density_deputy_kg_m3.value_or(density_chief_kg_m3);
}

Eigen::RowVector3d ScenarioConfig::sensitivity() const {
  if (sensitivity_m2_kg) return *sensitivity_m2_kg;
  return Eigen::RowVector3d::Constant(4.0 * drag_coefficient * facet_area_m2 /
                                      mass_kg);
}

DragParams ScenarioConfig::to_drag_params() const {
  DragParams d;
  d.sensitivity = sensitivity() * kM2ToKm2;
  d.beta_chief = beta_chief() * kM2ToKm2;
  d.beta_deputy = beta_deputy() * kM2ToKm2;
  d.density_chief = drag_enabled ? density_chief_kg_m3 * kKgM3ToKgKm3 : 0.0;
  d.density_deputy = drag_enabled ? density_deputy() * kKgM3ToKgKm3 : 0.0;
  d.scale_height = scale_height_km;
  d.chief_radius = chief_radius_km;
  d.facets = {Facet{facet_area_m2 * kM2ToKm2, drag_coefficient, facet_normal}};
  d.mass = mass_kg;
  return d;
}

J2Params ScenarioConfig::to_j2_params() const {
  J2Params p;
  p.j2 = j2_enabled ? j2 : 0.0;
  p.earth_radius = earth_radius_km;
  p.reference_radius = reference_radius_km;
  p.inclination = chief.inclination_deg * std::numbers::pi / 180.0;
  return p;
}

InputSpec ScenarioConfig::to_input_spec() const {
  return InputSpec{input_model, reference_velocity_kms, direct_gain};
}

PlantModel ScenarioConfig::plant() const {
  return build_plant(n_bar, to_j2_params(), to_drag_params(), to_input_spec());
}

double ScenarioConfig::period() const {
  if (period_s) return *period_s;
  const double a = chief.semi_major_axis_km;
  return 2.0 * std::numbers::pi * std::sqrt(a * a * a / kEarthMuKm3s2);
}

Vector ScenarioConfig::initial_state() const {
  if (x0) return *x0;
  return hill_initial_state(deputy, chief);
}

std::string ScenarioConfig::resolved_output_dir() const {
  if (output_dir) return *output_dir;
  if (const char* env = std::getenv(kOutputDirEnv); env && *env) return env;
  return "ddvi_out";
}

std::vector<std::string> ScenarioConfig::violations() const {
  std::vector<std::string> v;
  auto guard = [&](const std::function<void()>& fn) {
    try {
      fn();
    } catch (const std::exception& e) {
      v.emplace_back(e.what());
    }
  };
  if (!(n_bar > 0.0) || !std::isfinite(n_bar)) {
    v.emplace_back("plant.n_bar must be positive");
  }
  if (j2_enabled && !(reference_radius_km > 0.0)) {
    v.emplace_back("plant.reference_radius_km must be positive");
  }
  if (!(direct_gain != 0.0) || !std::isfinite(direct_gain)) {
    v.emplace_back("plant.direct_gain must be finite and nonzero");
  }
  guard([&] { chief.validate("chief"); });
  guard([&] { deputy.validate("deputy"); });
  if (!(facet_area_m2 > 0.0)) v.emplace_back("drag.facet_area_m2 must be > 0");
  if (!(density_chief_kg_m3 >= 0.0) || !(density_deputy() >= 0.0)) {
    v.emplace_back("drag densities must be >= 0");
  }
  if (!(mass_kg > 0.0)) v.emplace_back("drag.mass_kg must be > 0");
  if (std::abs(facet_normal.norm() - 1.0) > 1e-12) {
    v.emplace_back("drag.facet_normal must be a unit vector");
  }
  if (!(scale_height_km > 0.0)) {
    v.emplace_back("drag.scale_height_km must be > 0");
  }
  if (!is_psd(Q, false)) v.emplace_back("cost.Q must be symmetric PSD");
  if (!is_psd(R, true)) v.emplace_back("cost.R must be symmetric PD");
  if (!is_psd(Qbar, true)) v.emplace_back("cost.Qbar must be symmetric PD");
  if (!is_psd(Rbar, true)) v.emplace_back("cost.Rbar must be symmetric PD");
  guard([&] { schedule.validate(); });
  if (schedule.p0.dim() != 0 && schedule.p0.dim() != 6) {
    v.emplace_back("schedule.P0 must be 6x6");
  }
  if (period_s && !(*period_s > 0.0)) {
    v.emplace_back("simulation.period_s must be > 0");
  }
  if (!(learn_end_periods > 0.0)) {
    v.emplace_back("simulation.learn_end_periods must be > 0");
  }
  if (!(learn_end_periods < horizon_periods)) {
    v.emplace_back("simulation.learn_end_periods must be < horizon_periods");
  }
  if (!(dt_s > 0.0)) v.emplace_back("simulation.dt_s must be > 0");
  if (!(settle_tolerance_km > 0.0)) {
    v.emplace_back("simulation.settle_tolerance_km must be > 0");
  }
  if (!(state_cap_km > 0.0)) v.emplace_back("simulation.state_cap_km must be > 0");
  if (x0 && (x0->size() != 6 || !x0->allFinite())) {
    v.emplace_back("simulation.x0 must have 6 finite entries");
  }
  if (v0.size() != 8 || !v0.allFinite()) {
    v.emplace_back("simulation.v0 must have 8 finite entries");
  }
  const long required = 6 * 7 / 2 + (3 + 8) * 6;
  if (windows < required) {
    v.emplace_back("collection.windows = " + std::to_string(windows) +
                   " is below the minimum of " + std::to_string(required));
  }
  if (!(window_s > 0.0)) {
    v.emplace_back("collection.window_s must be > 0");
  } else if (dt_s > 0.0) {
    const double ratio = window_s / dt_s;
    if (std::abs(ratio - std::round(ratio)) > 1e-9 * ratio || ratio < 0.5) {
      v.emplace_back("collection.window_s must be a multiple of dt_s");
    }
  }
  if (window_s > 0.0 && windows > 0 && learn_end_periods > 0.0 &&
      static_cast<double>(windows) * window_s > learn_end() * (1 + 1e-12)) {
    v.emplace_back("collection windows exceed the learning interval");
  }
  if (K0.rows() != 3 || K0.cols() != 6 || !K0.allFinite()) {
    v.emplace_back("collection.K0 must be a finite 3x6 matrix");
  }
  if (noise.sinusoids_per_axis < 1) {
    v.emplace_back("noise.sinusoids_per_axis must be >= 1");
  }
  if (!(noise.amplitude >= 0.0) || !std::isfinite(noise.amplitude)) {
    v.emplace_back("noise.amplitude must be finite and >= 0");
  }
  if (!(noise.omega_min > 0.0) || !(noise.omega_max >= noise.omega_min)) {
    v.emplace_back("noise frequencies need 0 < omega_min <= omega_max");
  }
  if (trajectory_stride < 1) {
    v.emplace_back("output.trajectory_stride must be >= 1");
  }
  return v;
}

std::vector<std::string> ScenarioConfig::warnings() const {
  std::vector<std::string> w;
  const double a = chief.semi_major_axis_km;
  if (!period_s && a > 0.0 && n_bar > 0.0) {
    const double kepler = std::sqrt(kEarthMuKm3s2 / (a * a * a));
    const double gap = std::abs(n_bar - kepler) / kepler;
    if (gap > 0.05) {
      char buf[200];
      std::snprintf(buf, sizeof buf,
                    "plant.n_bar = %.6g 1/s differs from the chief Kepler "
                    "mean motion %.6g 1/s by %.1f%%",
                    n_bar, kepler, 100.0 * gap);
      w.emplace_back(buf);
    }
  }
  return w;
}

void ScenarioConfig::validate() const {
  const auto v = violations();
  if (v.empty()) return;
  std::string msg = "invalid configuration:";
  for (const auto& e : v) msg += "\n  - " + e;
  throw ConfigError(msg);
}

ScenarioConfig parse_config_string(const std::string& text) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  ScenarioConfig c = from_yaml(root);
  c.validate();
  return c;
}

ScenarioConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config file not found or unreadable: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return parse_config_string(ss.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

std::string write_config(const ScenarioConfig& c) {
  std::ostringstream os;
  os << "plant:\n"
     << "  n_bar: " << num(c.n_bar) << "\n"
     << "  j2_enabled: " << (c.j2_enabled ? "true" : "false") << "\n"
     << "  j2: " << num(c.j2) << "\n"
     << "  earth_radius_km: " << num(c.earth_radius_km) << "\n"
     << "  reference_radius_km: " << num(c.reference_radius_km) << "\n"
     << "  input_model: " << input_model_name(c.input_model) << "\n"
     << "  reference_velocity_kms: " << list(c.reference_velocity_kms) << "\n"
     << "  direct_gain: " << num(c.direct_gain) << "\n";
  write_elements(os, "chief", c.chief);
  write_elements(os, "deputy", c.deputy);
  os << "drag:\n"
     << "  enabled: " << (c.drag_enabled ? "true" : "false") << "\n"
     << "  mass_kg: " << num(c.mass_kg) << "\n"
     << "  facet_area_m2: " << num(c.facet_area_m2) << "\n"
     << "  drag_coefficient: " << num(c.drag_coefficient) << "\n"
     << "  facet_normal: " << list(c.facet_normal) << "\n"
     << "  density_chief_kg_m3: " << num(c.density_chief_kg_m3) << "\n"
     << "  density_deputy_kg_m3: " << opt(c.density_deputy_kg_m3) << "\n"
     << "  beta_chief_m2_kg: " << opt(c.beta_chief_m2_kg) << "\n"
     << "  beta_deputy_m2_kg: " << opt(c.beta_deputy_m2_kg) << "\n"
     << "  scale_height_km: " << num(c.scale_height_km) << "\n"
     << "  chief_radius_km: " << num(c.chief_radius_km) << "\n"
     << "  sensitivity_m2_kg: "
     << (c.sensitivity_m2_kg ? list(*c.sensitivity_m2_kg) : "null") << "\n";
  os << "cost:\n"
     << "  Q: " << rows(c.Q) << "\n"
     << "  R: " << rows(c.R) << "\n"
     << "  Qbar: " << rows(c.Qbar) << "\n"
     << "  Rbar: " << rows(c.Rbar) << "\n";
  os << "schedule:\n"
     << "  step_scale: " << num(c.schedule.step_scale) << "\n"
     << "  step_exponent: " << num(c.schedule.step_exponent) << "\n"
     << "  ball_base: " << num(c.schedule.ball_base) << "\n"
     << "  fixed_bound: " << opt(c.schedule.fixed_bound) << "\n"
     << "  threshold: " << num(c.schedule.threshold) << "\n"
     << "  max_iterations: " << c.schedule.max_iterations << "\n"
     << "  P0: "
     << (c.schedule.p0.dim() > 0 ? rows(c.schedule.p0.matrix()) : "null")
     << "\n";
  os << "simulation:\n"
     << "  horizon_periods: " << num(c.horizon_periods) << "\n"
     << "  learn_end_periods: " << num(c.learn_end_periods) << "\n"
     << "  dt_s: " << num(c.dt_s) << "\n"
     << "  period_s: " << opt(c.period_s) << "\n"
     << "  settle_tolerance_km: " << num(c.settle_tolerance_km) << "\n"
     << "  state_cap_km: " << num(c.state_cap_km) << "\n"
     << "  x0: " << (c.x0 ? list(*c.x0) : "null") << "\n"
     << "  v0: " << list(c.v0) << "\n";
  os << "collection:\n"
     << "  window_s: " << num(c.window_s) << "\n"
     << "  windows: " << c.windows << "\n"
     << "  K0: " << rows(c.K0) << "\n";
  os << "noise:\n"
     << "  sinusoids_per_axis: " << c.noise.sinusoids_per_axis << "\n"
     << "  amplitude: " << num(c.noise.amplitude) << "\n"
     << "  omega_min: " << num(c.noise.omega_min) << "\n"
     << "  omega_max: " << num(c.noise.omega_max) << "\n"
     << "  seed: " << c.noise.seed << "\n";
  os << "output:\n"
     << "  directory: " << (c.output_dir ? quoted(*c.output_dir) : "null")
     << "\n"
     << "  trajectory_stride: " << c.trajectory_stride << "\n";
  return os.str();
}

void save_config(const ScenarioConfig& config, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write config file: " + path);
  out << write_config(config);
  if (!out) throw IoError("failed writing config file: " + path);
}

bool operator==(const ScenarioConfig& a, const ScenarioConfig& b) {
  auto same_el = [](const OrbitalElements& x, const OrbitalElements& y) {
    return x.semi_major_axis_km == y.semi_major_axis_km &&
           x.inclination_deg == y.inclination_deg && x.raan_deg == y.raan_deg &&
           x.arg_perigee_deg == y.arg_perigee_deg &&
           x.true_anomaly_deg == y.true_anomaly_deg;
  };
  auto same_m = [](const Matrix& x, const Matrix& y) {
    return x.rows() == y.rows() && x.cols() == y.cols() && x == y;
  };
  const auto& s = a.schedule;
  const auto& t = b.schedule;
  return a.n_bar == b.n_bar && a.j2_enabled == b.j2_enabled && a.j2 == b.j2 &&
         a.earth_radius_km == b.earth_radius_km &&
         a.reference_radius_km == b.reference_radius_km &&
         a.input_model == b.input_model &&
         a.reference_velocity_kms == b.reference_velocity_kms &&
         a.direct_gain == b.direct_gain && same_el(a.chief, b.chief) &&
         same_el(a.deputy, b.deputy) && a.drag_enabled == b.drag_enabled &&
         a.mass_kg == b.mass_kg && a.facet_area_m2 == b.facet_area_m2 &&
         a.drag_coefficient == b.drag_coefficient &&
         a.facet_normal == b.facet_normal &&
         a.density_chief_kg_m3 == b.density_chief_kg_m3 &&
         a.density_deputy_kg_m3 == b.density_deputy_kg_m3 &&
         a.beta_chief_m2_kg == b.beta_chief_m2_kg &&
         a.beta_deputy_m2_kg == b.beta_deputy_m2_kg &&
         a.scale_height_km == b.scale_height_km &&
         a.chief_radius_km == b.chief_radius_km &&
         a.sensitivity_m2_kg == b.sensitivity_m2_kg && same_m(a.Q, b.Q) &&
         same_m(a.R, b.R) && same_m(a.Qbar, b.Qbar) && same_m(a.Rbar, b.Rbar) &&
         s.step_scale == t.step_scale && s.step_exponent == t.step_exponent &&
         s.ball_base == t.ball_base && s.fixed_bound == t.fixed_bound &&
         s.threshold == t.threshold && s.max_iterations == t.max_iterations &&
         same_m(s.p0.matrix(), t.p0.matrix()) &&
         a.horizon_periods == b.horizon_periods &&
         a.learn_end_periods == b.learn_end_periods && a.dt_s == b.dt_s &&
         a.period_s == b.period_s &&
         a.settle_tolerance_km == b.settle_tolerance_km &&
         a.state_cap_km == b.state_cap_km &&
         a.x0.has_value() == b.x0.has_value() &&
         (!a.x0 || same_m(*a.x0, *b.x0)) && same_m(a.v0, b.v0) &&
         a.window_s == b.window_s && a.windows == b.windows &&
         same_m(a.K0, b.K0) &&
         a.noise.sinusoids_per_axis == b.noise.sinusoids_per_axis &&
         a.noise.amplitude == b.noise.amplitude &&
         a.noise.omega_min == b.noise.omega_min &&
         a.noise.omega_max == b.noise.omega_max &&
         a.noise.seed == b.noise.seed && a.output_dir == b.output_dir &&
         a.trajectory_stride == b.trajectory_stride;
}

}  // namespace ddvi
