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

#include "ddvi/cw_plant.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "ddvi/errors.hpp"

namespace ddvi {

void OrbitalElements::validate(const std::string& label) const {
  if (!(semi_major_axis_km > kEarthRadiusKm)) {
    throw ConfigError(label + ": semi-major axis must exceed the Earth radius");
  }
  for (double angle :
       {inclination_deg, raan_deg, arg_perigee_deg, true_anomaly_deg}) {
    if (!std::isfinite(angle)) {
      throw ConfigError(label + ": orbital angles must be finite");
    }
  }
}

void DragParams::validate() const {
  if (!(mass > 0.0)) throw ConfigError("drag: mass must be positive");
  if (density_chief < 0.0 || density_deputy < 0.0) {
    throw ConfigError("drag: densities must be non-negative");
  }
  if (!(scale_height > 0.0)) {
    throw ConfigError("drag: scale height must be positive");
  }
  for (const Facet& f : facets) {
    if (!(f.area > 0.0)) throw ConfigError("drag: facet area must be positive");
    if (std::abs(f.normal.norm() - 1.0) > 1e-12) {
      throw ConfigError("drag: facet normals must be unit vectors");
    }
  }
}

double J2Params::s() const {
  return 3.0 * j2 * earth_radius * earth_radius /
         (8.0 * reference_radius * reference_radius) *
         (1.0 + 3.0 * std::cos(2.0 * inclination));
}

double J2Params::c() const { return std::sqrt(1.0 + s()); }

void PlantModel::check_dimensions() const {
  const Eigen::Index nn = A.rows();
  if (A.cols() != nn || B.rows() != nn || C.cols() != nn || D.rows() != nn ||
      E.rows() != E.cols() || D.cols() != E.rows() || F.rows() != C.rows() ||
      F.cols() != E.rows()) {
    throw std::invalid_argument("PlantModel: inconsistent matrix dimensions");
  }
}

double density_at_offset(double density_chief, double x, double scale_height,
                         bool exact) {
  if (!(scale_height > 0.0)) {
    throw std::invalid_argument("density_at_offset: scale height must be > 0");
  }
  return exact ? density_chief * std::exp(-x / scale_height)
               : density_chief * (1.0 - x / scale_height);
}

Eigen::RowVector3d drag_sensitivity(const DragParams& params,
                                    const Eigen::Vector3d& reference) {
  if (!(params.mass > 0.0)) {
    throw std::invalid_argument("drag_sensitivity: mass must be positive");
  }
  if (params.facets.empty()) {
    throw std::invalid_argument("drag_sensitivity: no facets");
  }
  Eigen::Matrix3d skew;
  skew << 0.0, -reference.z(), reference.y(),  //
      reference.z(), 0.0, -reference.x(),       //
      -reference.y(), reference.x(), 0.0;
  Eigen::RowVector3d row = Eigen::RowVector3d::Zero();
  for (const Facet& f : params.facets) {
    row += 4.0 * f.drag_coefficient * f.area * f.normal.transpose() * skew;
  }
  return row / params.mass;
}

Matrix build_A(double n_bar, const J2Params& j2, const DragParams& drag) {
  const double c = j2.c();
  const double n2 = n_bar * n_bar;
  const double damping = drag.deputy_drag_factor() * n_bar;

  // The z row uses -n^2 so that the matrix reproduces zddot + n^2 z = 0.
  Matrix a = Matrix::Zero(6, 6);
  a.block<3, 3>(0, 3).setIdentity();
  a(3, 0) = (5.0 * c * c - 2.0) * n2;
  a(5, 2) = -n2;
  a(3, 3) = -0.5 * damping;
  a(3, 4) = 2.0 * n_bar * c;
  a(4, 3) = -2.0 * n_bar;
  a(4, 4) = -damping;
  a(5, 5) = -0.5 * damping;
  return a;
}

Matrix build_B(double n_bar, const DragParams& drag, const InputSpec& input) {
  Matrix b = Matrix::Zero(6, 3);
  const double pd = drag.density_deputy;
  const double rc = drag.chief_radius;
  switch (input.model) {
    case InputModel::kDragSensitivity:
      b.row(4) = 0.5 * n_bar * n_bar * rc * rc * pd * drag.sensitivity;
      break;
    case InputModel::kDragSensitivityExtended: {
      const Eigen::Vector3d& v0 = input.reference_velocity;
      b.row(3) = -0.5 * pd * rc * n_bar * v0.x() * drag.sensitivity;
      b.row(4) = 0.5 * (pd * n_bar * n_bar * rc * rc - pd * n_bar * rc * v0.y()) *
                 drag.sensitivity;
      b.row(5) = -0.5 * pd * rc * n_bar * v0.z() * drag.sensitivity;
      break;
    }
    case InputModel::kDirect:
      b.block<3, 3>(3, 0) = input.direct_gain * Eigen::Matrix3d::Identity();
      break;
  }
  return b;
}

ExoOutput build_exo_and_output(double n_bar, const J2Params& j2,
                               const DragParams& drag,
                               std::span<const double> frequencies) {
  ExoOutput out;
  out.E = Exosystem(std::vector<double>(frequencies.begin(), frequencies.end()))
              .matrix();
  const Eigen::Index q = out.E.rows();
  if (q < 8) {
    throw std::invalid_argument(
        "build_exo_and_output: the disturbance pattern needs 8 exostates");
  }

  out.C = Matrix::Zero(3, 6);
  out.C.leftCols(3).setIdentity();
  out.F = Matrix::Zero(3, q);
  out.F.leftCols(3).setIdentity();

  const double big_xi = -3.0 * n_bar * n_bar * j2.j2 * j2.earth_radius *
                        j2.earth_radius / j2.reference_radius;
  const double small_xi =
      -n_bar * n_bar * drag.chief_radius * drag.chief_radius *
      (drag.beta_chief * drag.density_chief -
       drag.beta_deputy * drag.density_deputy) /
      2.0;
  out.D = Matrix::Zero(6, q);
  out.D(3, 2) = big_xi;
  out.D(3, 5) = big_xi;
  out.D(4, 4) = big_xi + small_xi;
  out.D(5, 0) = big_xi;
  out.D(5, 6) = big_xi;
  return out;
}

PlantModel build_plant(double n_bar, const J2Params& j2, const DragParams& drag,
                       const InputSpec& input) {
  ExoOutput exo = build_exo_and_output(n_bar, j2, drag);
  PlantModel plant;
  plant.A = build_A(n_bar, j2, drag);
  plant.B = build_B(n_bar, drag, input);
  plant.C = std::move(exo.C);
  plant.D = std::move(exo.D);
  plant.E = std::move(exo.E);
  plant.F = std::move(exo.F);
  plant.n_bar = n_bar;
  return plant;
}

std::vector<ModeRank> regulator_rank_condition(const Matrix& a, const Matrix& b,
                                               const Matrix& c,
                                               const Matrix& e) {
  using Cx = std::complex<double>;
  const Eigen::Index n = a.rows(), m = b.cols(), p = c.rows();
  const double scale = std::max(norm2(a), 1.0);
  Matrix bs = b, cs = c;
  for (Eigen::Index j = 0; j < m; ++j) {
    const double nb = bs.col(j).norm();
    if (nb > 0.0) bs.col(j) *= scale / nb;
  }
  for (Eigen::Index i = 0; i < p; ++i) {
    const double nc = cs.row(i).norm();
    if (nc > 0.0) cs.row(i) *= scale / nc;
  }

  std::vector<ModeRank> out;
  const ComplexVector eig = spectrum(e);
  for (Eigen::Index k = 0; k < eig.size(); ++k) {
    Eigen::MatrixXcd mat = Eigen::MatrixXcd::Zero(n + p, n + m);
    mat.topLeftCorner(n, n) =
        a.cast<Cx>() - eig(k) * Eigen::MatrixXcd::Identity(n, n);
    mat.topRightCorner(n, m) = bs.cast<Cx>();
    mat.bottomLeftCorner(p, n) = cs.cast<Cx>();
    out.push_back({eig(k), numerical_rank(mat, 1e-8), n + p});
  }
  return out;
}

std::string AssumptionReport::summary() const {
  std::ostringstream os;
  auto modes = [&os](const std::vector<std::complex<double>>& v) {
    for (const auto& l : v) os << " (" << l.real() << (l.imag() < 0 ? "" : "+")
                              << l.imag() << "i)";
  };
  os << "stabilizable(A,B)=" << (stabilizable ? "yes" : "no");
  if (!stabilizable) modes(unstabilizable_modes);
  os << "; observable(C,A)=" << (observable ? "yes" : "no");
  if (!observable) modes(unobservable_modes);
  os << "; observable(A,sqrtQ)=" << (cost_observable ? "yes" : "no");
  if (!cost_observable) modes(cost_unobservable_modes);
  os << "; regulator rank=" << (regulator_rank ? "yes" : "no");
  for (const ModeRank& r : regulator_ranks) {
    if (r.rank < r.required) {
      os << " [lambda=" << r.lambda.real() << (r.lambda.imag() < 0 ? "" : "+")
         << r.lambda.imag() << "i rank " << r.rank << "/" << r.required << "]";
    }
  }
  return os.str();
}

AssumptionReport validate_assumptions(const PlantModel& plant, const Matrix& q) {
  plant.check_dimensions();
  AssumptionReport r;
  r.unstabilizable_modes = ddvi::unstabilizable_modes(plant.A, plant.B);
  r.stabilizable = r.unstabilizable_modes.empty();
  r.unobservable_modes = ddvi::unobservable_modes(plant.C, plant.A);
  r.observable = r.unobservable_modes.empty();
  r.cost_unobservable_modes = ddvi::unobservable_modes(sqrtm_psd(q), plant.A);
  r.cost_observable = r.cost_unobservable_modes.empty();
  r.regulator_ranks =
      regulator_rank_condition(plant.A, plant.B, plant.C, plant.E);
  r.regulator_rank = true;
  for (const ModeRank& mr : r.regulator_ranks) {
    if (mr.rank < mr.required) r.regulator_rank = false;
  }
  return r;
}

Exosystem::Exosystem(std::vector<double> frequencies)
    : frequencies_(std::move(frequencies)) {
  if (frequencies_.empty()) {
    throw std::invalid_argument("Exosystem: no frequencies");
  }
}

Exosystem Exosystem::FromMatrix(const Matrix& e, double tol) {
  if (e.rows() != e.cols() || e.rows() % 2 != 0 || e.rows() == 0) {
    throw std::invalid_argument("Exosystem: E must be square of even size");
  }
  std::vector<double> w;
  const Eigen::Index blocks = e.rows() / 2;
  Matrix rebuilt = Matrix::Zero(e.rows(), e.cols());
  for (Eigen::Index k = 0; k < blocks; ++k) {
    const double wk = e(2 * k, 2 * k + 1);
    w.push_back(wk);
    rebuilt(2 * k, 2 * k + 1) = wk;
    rebuilt(2 * k + 1, 2 * k) = -wk;
  }
  const double scale = std::max(1.0, e.cwiseAbs().maxCoeff());
  if ((rebuilt - e).cwiseAbs().maxCoeff() > tol * scale) {
    throw std::invalid_argument(
        "Exosystem: E is not block-diagonal with 2x2 rotation blocks");
  }
  return Exosystem(std::move(w));
}

Matrix Exosystem::matrix() const {
  std::vector<Matrix> blocks;
  for (double w : frequencies_) {
    Matrix b(2, 2);
    b << 0.0, w, -w, 0.0;
    blocks.push_back(std::move(b));
  }
  return bdiag(blocks);
}

Vector Exosystem::advance(const Vector& v, double dt) const {
  if (v.size() != dim()) {
    throw std::invalid_argument("Exosystem::advance: state size mismatch");
  }
  if (dt < 0.0) {
    throw std::invalid_argument("Exosystem::advance: negative step");
  }
  Vector out(v.size());
  for (std::size_t k = 0; k < frequencies_.size(); ++k) {
    const Eigen::Index i = static_cast<Eigen::Index>(2 * k);
    // Rotate and renormalise in extended precision.
    const long double angle =
        static_cast<long double>(frequencies_[k]) * static_cast<long double>(dt);
    const long double c = std::cos(angle), s = std::sin(angle);
    const long double a = v(i), b = v(i + 1);
    long double na = c * a + s * b;
    long double nb = -s * a + c * b;
    const long double before = std::sqrt(a * a + b * b);
    const long double after = std::sqrt(na * na + nb * nb);
    if (after > 0.0L) {
      na *= before / after;
      nb *= before / after;
    }
    out(i) = static_cast<double>(na);
    out(i + 1) = static_cast<double>(nb);
  }
  return out;
}

Vector exo_step(const Matrix& e, const Vector& v, double dt) {
  return Exosystem::FromMatrix(e).advance(v, dt);
}

}  // namespace ddvi
