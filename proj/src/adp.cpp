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

#include <algorithm>
#include <atomic>
#include <cmath>
#include <future>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "ddvi/errors.hpp"

namespace ddvi {

namespace {

std::atomic<long> g_theta_assemblies{0};

double unit_uniform(std::mt19937_64& gen) {
  return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

long samples_per_window(const Trajectory& traj, double window) {
  const double dt = traj.step();
  if (!(dt > 0.0) || !(window > 0.0)) {
    throw ConfigError("accumulate: window and trajectory step must be > 0");
  }
  const long w = std::lround(window / dt);
  if (w < 1 || std::abs(static_cast<double>(w) * dt - window) > 1e-9 * window) {
    std::ostringstream os;
    os << "accumulate: window " << window
       << " s is not a multiple of the integrator step " << dt << " s";
    throw ConfigError(os.str());
  }
  return w;
}

}  // namespace

XjBasis build_xj_basis(const Matrix& c, const Matrix& f) {
  if (c.rows() != f.rows()) {
    throw std::invalid_argument("build_xj_basis: C and F row counts differ");
  }
  const Eigen::Index n = c.cols(), p = c.rows(), q = f.cols();
  const long rank = numerical_rank(c);
  if (rank < p) {
    throw RankDeficient("build_xj_basis: C must have full row rank", rank, p);
  }
  const Matrix null = null_space(c);

  XjBasis basis;
  basis.null_dim = null.cols() * q;
  basis.X.reserve(2 + basis.null_dim);
  basis.X.push_back(Matrix::Zero(n, q));
  basis.X.push_back(-c.transpose() * (c * c.transpose()).ldlt().solve(f));
  for (Eigen::Index k = 0; k < q; ++k) {
    for (Eigen::Index i = 0; i < null.cols(); ++i) {
      Matrix xj = Matrix::Zero(n, q);
      xj.col(k) = null.col(i);
      basis.X.push_back(std::move(xj));
    }
  }
  return basis;
}

DataLog accumulate(const Trajectory& traj, const Matrix& xj,
                   const WindowSpec& spec) {
  if (spec.count < 1 || spec.first_sample < 0) {
    throw ConfigError("accumulate: need at least one window");
  }
  const Eigen::Index n = traj.x.rows(), m = traj.u.rows(), q = traj.v.rows();
  if (xj.rows() != n || xj.cols() != q) {
    throw std::invalid_argument("accumulate: X_j has the wrong shape");
  }
  const long w = samples_per_window(traj, spec.window);
  const long last = spec.first_sample + spec.count * w;
  if (last >= traj.size()) {
    std::ostringstream os;
    os << "accumulate: trajectory covers " << traj.duration() << " s but "
       << spec.count << " windows of " << spec.window << " s are required";
    if (traj.blowup_time) {
      os << " (state cap hit at t = " << *traj.blowup_time << " s)";
      throw NumericalError(os.str());
    }
    throw ConfigError(os.str());
  }

  const double dt = traj.step();
  const Eigen::Index ns = sym_size(n);
  DataLog log;
  log.ixx = Matrix::Zero(spec.count, ns);
  log.gxu = Matrix::Zero(spec.count, n * m);
  log.gxv = Matrix::Zero(spec.count, n * q);
  log.dxx.resize(spec.count, ns);
  log.boundaries.reserve(spec.count + 1);

  Vector xb(n), vv(ns), xu(n * m), xv(n * q), vv_start(ns);
  auto sample = [&](long s) {
    xb = traj.x.col(s) - xj * traj.v.col(s);
    vecv_into(xb, vv);
    for (Eigen::Index i = 0; i < n; ++i) {
      xu.segment(i * m, m) = xb(i) * traj.u.col(s);
      xv.segment(i * q, q) = xb(i) * traj.v.col(s);
    }
  };

  for (long l = 0; l < spec.count; ++l) {
    const long s0 = spec.first_sample + l * w;
    log.boundaries.push_back(traj.t[s0]);
    for (long s = s0; s <= s0 + w; ++s) {
      sample(s);
      const double weight = (s == s0 || s == s0 + w) ? 0.5 * dt : dt;
      log.ixx.row(l) += weight * vv.transpose();
      log.gxu.row(l) += weight * xu.transpose();
      log.gxv.row(l) += weight * xv.transpose();
      if (s == s0) vv_start = vv;
    }
    log.dxx.row(l) = (vv - vv_start).transpose();
  }
  log.boundaries.push_back(traj.t[last]);
  return log;
}

std::vector<DataLog> accumulate(const Trajectory& traj, const XjBasis& basis,
                                const WindowSpec& spec) {
  const std::size_t count = basis.size();
  std::vector<DataLog> logs(count);
  const std::size_t workers = std::clamp<std::size_t>(
      std::thread::hardware_concurrency(), 1, std::max<std::size_t>(count, 1));
  std::vector<std::future<void>> jobs;
  jobs.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    jobs.push_back(std::async(std::launch::async, [&, w] {
      for (std::size_t j = w; j < count; j += workers) {
        logs[j] = accumulate(traj, basis.X[j], spec);
      }
    }));
  }
  for (auto& job : jobs) job.get();
  return logs;
}

RankCheck check_rank(const DataLog& log) {
  Matrix m(log.ixx.rows(), log.ixx.cols() + log.gxu.cols() + log.gxv.cols());
  m << log.ixx, log.gxu, log.gxv;
  equilibrate_columns(m);
  RankCheck out;
  out.required = m.cols();
  out.rank = m.rows() > 0 ? numerical_rank(m) : 0;
  out.full = out.rank == out.required;
  return out;
}

DataEquation::DataEquation(const DataLog& log, const Matrix& r, Eigen::Index n,
                           Eigen::Index q)
    : n_(n), m_(r.rows()), q_(q) {
  const Eigen::Index ns = sym_size(n);
  if (log.ixx.cols() != ns || log.gxu.cols() != n * m_ ||
      log.gxv.cols() != n * q || r.cols() != m_) {
    throw std::invalid_argument("DataEquation: log shape mismatch");
  }
  theta_.resize(log.windows(), ns + n * m_ + n * q);
  theta_ << log.ixx, 2.0 * log.gxu * kron(Matrix::Identity(n, n), r),
      2.0 * log.gxv;
  dxx_ = log.dxx;
  ++g_theta_assemblies;

  Matrix scaled = theta_;
  const Vector scale = equilibrate_columns(scaled);
  const LeastSquares ls(scaled);
  rank_ = ls.rank();
  cond_ = ls.condition_number();
  if (rank_ < theta_.cols()) {
    throw RankDeficient("DataEquation: Theta lacks full column rank", rank_,
                        theta_.cols());
  }
  solve_map_ = scale.cwiseInverse().asDiagonal() * (ls.pinv() * dxx_);
}

long DataEquation::assemblies() { return g_theta_assemblies.load(); }

Vector DataEquation::unknowns(const SymMatrix& p) const {
  return solve_map_ * vecs(p);
}

DataEquation::Solution DataEquation::solve(const SymMatrix& p) const {
  const Vector z = unknowns(p);
  const Eigen::Index ns = sym_size(n_);
  Solution s;
  s.H = unvecs(z.head(ns), n_);
  s.K = unvec(z.segment(ns, n_ * m_), m_, n_);
  s.W = unvec(z.tail(n_ * q_), q_, n_);
  return s;
}

double DataEquation::relative_residual(const SymMatrix& p) const {
  const Vector rhs = dxx_ * vecs(p);
  const double denom = rhs.norm();
  const double res = (theta_ * unknowns(p) - rhs).norm();
  return denom > 0.0 ? res / denom : res;
}

ViDataStep vi_data_step(const DataEquation& eq, const SymMatrix& p,
                        const Matrix& q, const Matrix& r, double epsilon,
                        double bound, const SymMatrix& p0) {
  DataEquation::Solution sol = eq.solve(p);
  Matrix update = sol.H.matrix() + q - sol.K.transpose() * r * sol.K;
  update = 0.5 * (update + update.transpose());

  ViDataStep step;
  step.metric = sym_norm2(update);
  step.K = std::move(sol.K);
  step.H = std::move(sol.H);
  const Matrix candidate = p.matrix() + epsilon * update;
  if (!in_psd_ball(candidate, bound)) {
    step.P = p0;
    step.reset = true;
  } else {
    step.P = SymMatrix(candidate);
  }
  return step;
}

LearnedPolicy run_algorithm2(const Trajectory& traj, const XjBasis& basis,
                             const Matrix& q, const Matrix& r,
                             const ViSchedule& schedule,
                             const AdpOptions& options) {
  schedule.validate();
  if (basis.size() < 2) {
    throw std::invalid_argument("run_algorithm2: basis needs X_0 and X_1");
  }
  const Eigen::Index n = traj.x.rows(), m = traj.u.rows(), nq = traj.v.rows();
  if (q.rows() != n || r.rows() != m) {
    throw std::invalid_argument("run_algorithm2: Q or R has the wrong size");
  }

  const std::vector<DataLog> logs = accumulate(traj, basis, options.windows);
  LearnedPolicy out;
  for (std::size_t j = 0; j < logs.size(); ++j) {
    const RankCheck rc = check_rank(logs[j]);
    out.ranks.push_back(rc.rank);
    if (!rc.full) {
      throw RankDeficient(
          "data rank condition fails for X_" + std::to_string(j), rc.rank,
          rc.required);
    }
  }

  const long before = DataEquation::assemblies();
  const DataEquation eq0(logs[0], r, n, nq);
  out.theta_condition = eq0.condition_number();

  const SymMatrix p0 = schedule.initial_value(n);
  SymMatrix p = p0;
  long resets = 0;
  double last_metric = 0.0;
  bool converged = false;
  for (long k = 0; k < schedule.max_iterations; ++k) {
    const double eps = schedule.epsilon(k);
    ViDataStep step =
        vi_data_step(eq0, p, q, r, eps, schedule.bound(resets), p0);
    last_metric = step.metric;
    ViTraceEntry entry{k, eps, step.metric, sym_norm2(step.P), resets,
                       step.reset};
    if (step.reset) ++resets;
    converged = step.metric < schedule.threshold && !step.reset;
    out.trace.record(entry, converged);
    out.trace.iterations = k + 1;
    out.trace.resets = resets;
    p = std::move(step.P);
    if (converged) break;
  }
  out.trace.theta_assemblies =
      static_cast<int>(DataEquation::assemblies() - before);
  if (!converged) {
    std::ostringstream os;
    os << "data-driven value iteration: no convergence within "
       << schedule.max_iterations << " iterations (last metric " << last_metric
       << ", resets " << resets << ")";
    throw NotConverged(os.str(), schedule.max_iterations);
  }

  out.P = p;
  const Eigen::LLT<Matrix> llt(p.matrix());
  if (llt.info() != Eigen::Success) {
    throw NumericalError("run_algorithm2: learned value matrix is not PD");
  }
  {
    Eigen::SelfAdjointEigenSolver<Matrix> es(p.matrix());
    out.value_condition = es.eigenvalues().maxCoeff() / es.eigenvalues().minCoeff();
  }

  const DataEquation::Solution sol0 = eq0.solve(p);
  out.K = sol0.K;
  out.D_hat = llt.solve(sol0.W.transpose());
  out.B_hat = llt.solve(out.K.transpose() * r);
  out.data_residual = eq0.relative_residual(p);
  out.S.assign(basis.size(), Matrix::Zero(n, nq));
  for (std::size_t j = 1; j < basis.size(); ++j) {
    const DataEquation eq(logs[j], r, n, nq);
    out.S[j] = out.D_hat - llt.solve(eq.solve(p).W.transpose());
    out.data_residual = std::max(out.data_residual, eq.relative_residual(p));
  }

  // Problem 1 on z = [vec X; vec U] with X restricted to X_1 + span{X_j}.
  const Eigen::Index h = static_cast<Eigen::Index>(basis.size()) - 2;
  const Eigen::Index nx = n * nq, nu = m * nq;
  Matrix basis_vec(nx, h), image_vec(nx, h);
  for (Eigen::Index j = 0; j < h; ++j) {
    basis_vec.col(j) = vec(basis.X[j + 2]);
    image_vec.col(j) = vec(out.S[j + 2]);
  }
  const Vector x1 = vec(basis.X[1]);
  const Matrix in_nq = Matrix::Identity(nx, nx);
  Matrix cons = Matrix::Zero(2 * nx, nx + nu);
  cons.topLeftCorner(nx, nx) = image_vec * basis_vec.transpose();
  cons.topRightCorner(nx, nu) = -kron(Matrix::Identity(nq, nq), out.B_hat);
  cons.bottomLeftCorner(nx, nx) = in_nq - basis_vec * basis_vec.transpose();
  Vector rhs(2 * nx);
  rhs << vec(out.D_hat) - vec(out.S[1]) +
             image_vec * (basis_vec.transpose() * x1),
      cons.bottomLeftCorner(nx, nx) * x1;

  const Matrix qbar =
      options.qbar.size() > 0 ? options.qbar : Matrix::Identity(n, n);
  const Matrix rbar =
      options.rbar.size() > 0 ? options.rbar : Matrix::Identity(m, m);
  Matrix hess = Matrix::Zero(nx + nu, nx + nu);
  hess.topLeftCorner(nx, nx) = kron(Matrix::Identity(nq, nq), qbar);
  hess.bottomRightCorner(nu, nu) = kron(Matrix::Identity(nq, nq), rbar);
  const AffineQpSolution qp = minimize_on_affine(hess, cons, rhs);

  out.X = unvec(qp.z.head(nx), n, nq);
  out.U = unvec(qp.z.tail(nu), m, nq);
  out.L = out.U + out.K * out.X;
  out.regulator_residual = qp.constraint_residual;
  out.unique = qp.null_dim == 0;
  return out;
}

ExplorationNoise::ExplorationNoise(const NoiseSpec& spec)
    : amplitude_(spec.amplitude) {
  if (spec.axes < 1 || spec.sinusoids_per_axis < 1) {
    throw ConfigError("exploration noise: empty specification");
  }
  if (!(spec.amplitude >= 0.0) || !std::isfinite(spec.amplitude)) {
    throw ConfigError("exploration noise: amplitude must be finite and >= 0");
  }
  if (!(spec.omega_min > 0.0) || !(spec.omega_max >= spec.omega_min) ||
      !std::isfinite(spec.omega_max)) {
    throw ConfigError(
        "exploration noise: need 0 < omega_min <= omega_max < inf");
  }
  std::mt19937_64 gen(spec.seed);
  const Eigen::Index count = spec.sinusoids_per_axis;
  omega_.resize(spec.axes, count);
  phase_.resize(spec.axes, count);
  for (Eigen::Index i = 0; i < spec.axes; ++i) {
    for (Eigen::Index k = 0; k < count; ++k) {
      double w = 0.0;
      do {
        w = spec.omega_min + (spec.omega_max - spec.omega_min) *
                                 unit_uniform(gen);
      } while (spec.omega_max > spec.omega_min &&
               (omega_.row(i).head(k).array() == w).any());
      omega_(i, k) = w;
      phase_(i, k) = 2.0 * std::numbers::pi * unit_uniform(gen);
    }
  }
}

Vector ExplorationNoise::operator()(double t) const {
  Vector out(omega_.rows());
  for (Eigen::Index i = 0; i < omega_.rows(); ++i) {
    double s = 0.0;
    for (Eigen::Index k = 0; k < omega_.cols(); ++k) {
      s += std::sin(omega_(i, k) * t + phase_(i, k));
    }
    out(i) = amplitude_ * s;
  }
  return out;
}

double ExplorationNoise::bound() const {
  return amplitude_ * static_cast<double>(omega_.cols());
}

}  // namespace ddvi
