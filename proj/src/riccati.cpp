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

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "ddvi/errors.hpp"

namespace ddvi {
namespace {

std::string format_modes(const std::vector<std::complex<double>>& modes) {
  std::ostringstream os;
  for (const auto& l : modes) {
    os << " " << l.real() << (l.imag() < 0 ? "" : "+") << l.imag() << "i";
  }
  return os.str();
}

void check_problem(const Matrix& a, const Matrix& b, const Matrix& q,
                   const Matrix& r) {
  const Eigen::Index n = a.rows(), m = b.cols();
  if (a.cols() != n || b.rows() != n || q.rows() != n || q.cols() != n ||
      r.rows() != m || r.cols() != m) {
    throw std::invalid_argument("riccati: inconsistent matrix dimensions");
  }
  if (Eigen::LLT<Matrix>(r).info() != Eigen::Success) {
    throw AssumptionViolated("riccati: R must be positive definite");
  }
}

Matrix gain(const Eigen::LLT<Matrix>& r_llt, const Matrix& b, const Matrix& p) {
  return r_llt.solve(b.transpose() * p);
}

}  // namespace

double are_residual(const Matrix& a, const Matrix& b, const Matrix& q,
                    const Matrix& r, const Matrix& p) {
  const Matrix res = a.transpose() * p + p * a + q -
                     p * b * r.llt().solve(b.transpose() * p);
  const double qn = sym_norm2(q);
  return sym_norm2(0.5 * (res + res.transpose())) / (qn > 0.0 ? qn : 1.0);
}

Matrix solve_lyapunov(const Matrix& a, const Matrix& q) {
  const Eigen::Index n = a.rows();
  if (a.cols() != n || q.rows() != n || q.cols() != n) {
    throw std::invalid_argument("solve_lyapunov: dimension mismatch");
  }
  const Matrix id = Matrix::Identity(n, n);
  const Matrix op = kron(id, a.transpose()) + kron(a.transpose(), id);
  Eigen::FullPivLU<Matrix> lu(op);
  if (!lu.isInvertible()) {
    throw NumericalError(
        "solve_lyapunov: operator is singular (A has eigenvalues summing to "
        "zero)");
  }
  const Vector p = lu.solve(-vec(q));
  const Matrix pm = unvec(p, n, n);
  return 0.5 * (pm + pm.transpose());
}

AreSolution solve_are_exact(const Matrix& a, const Matrix& b, const Matrix& q,
                            const Matrix& r) {
  check_problem(a, b, q, r);
  const Eigen::Index n = a.rows();
  if (auto bad = unstabilizable_modes(a, b); !bad.empty()) {
    throw AssumptionViolated("riccati: (A, B) is not stabilizable; modes" +
                             format_modes(bad));
  }
  if (auto bad = unobservable_modes(sqrtm_psd(q), a); !bad.empty()) {
    throw AssumptionViolated("riccati: (A, sqrt(Q)) is not observable; modes" +
                             format_modes(bad));
  }

  const Eigen::LLT<Matrix> r_llt(r);
  const Matrix g = b * r_llt.solve(b.transpose());

  Matrix z(2 * n, 2 * n);
  z << a, -g, -q, -a.transpose();

  // Determinant-scaled Newton iteration for sign(H).
  const double dim = static_cast<double>(2 * n);
  for (int it = 0; it < 100; ++it) {
    Eigen::PartialPivLU<Matrix> lu(z);
    const double det = std::abs(lu.determinant());
    const double ck =
        (det > 0.0 && std::isfinite(det)) ? std::pow(det, -1.0 / dim) : 1.0;
    const Matrix next = 0.5 * (ck * z + lu.inverse() / ck);
    const double change = (next - z).norm() / next.norm();
    z = next;
    if (!z.allFinite()) break;
    if (change < 1e-13) break;
  }
  if (!z.allFinite()) {
    throw NumericalError("riccati: sign iteration diverged");
  }

  const Matrix w11 = z.topLeftCorner(n, n), w12 = z.topRightCorner(n, n);
  const Matrix w21 = z.bottomLeftCorner(n, n), w22 = z.bottomRightCorner(n, n);
  const Matrix id = Matrix::Identity(n, n);
  Matrix lhs(2 * n, n), rhs(2 * n, n);
  lhs << w12, w22 + id;
  rhs << w11 + id, w21;
  Matrix p = lhs.colPivHouseholderQr().solve(-rhs);
  p = 0.5 * (p + p.transpose());

  // Newton-Kleinman polish.
  double best = are_residual(a, b, q, r, p);
  for (int it = 0; it < 20 && best > 0.0; ++it) {
    const Matrix k = gain(r_llt, b, p);
    const Matrix acl = a - b * k;
    if (!is_hurwitz(acl, 0.0)) break;
    Matrix next;
    try {
      next = solve_lyapunov(acl, q + k.transpose() * r * k);
    } catch (const NumericalError&) {
      break;
    }
    const double res = are_residual(a, b, q, r, next);
    if (!(res < best)) break;
    best = res;
    p = next;
  }

  AreSolution sol{SymMatrix(p, 1e-8), Matrix(), 0.0};
  sol.K = gain(r_llt, b, sol.P.matrix());
  sol.residual = are_residual(a, b, q, r, sol.P.matrix());
  if (!is_hurwitz(a - b * sol.K)) {
    throw NumericalError(
        "riccati: computed solution is not stabilizing (closed-loop spectral "
        "abscissa " +
        std::to_string(spectral_abscissa(a - b * sol.K)) + ")");
  }
  return sol;
}

KleinmanResult kleinman_pi(const Matrix& a, const Matrix& b, const Matrix& q,
                           const Matrix& r, const Matrix& k0, double tol,
                           int max_iterations) {
  check_problem(a, b, q, r);
  if (k0.rows() != b.cols() || k0.cols() != a.rows()) {
    throw std::invalid_argument("kleinman_pi: K0 has the wrong shape");
  }
  if (!is_hurwitz(a - b * k0)) {
    throw AssumptionViolated("kleinman_pi: K0 is not stabilizing");
  }
  const Eigen::LLT<Matrix> r_llt(r);

  KleinmanResult out;
  out.gains.push_back(k0);
  for (int it = 0; it < max_iterations; ++it) {
    const Matrix& k = out.gains.back();
    SymMatrix p(solve_lyapunov(a - b * k, q + k.transpose() * r * k), 1e-8);
    out.gains.push_back(gain(r_llt, b, p.matrix()));
    const bool done =
        !out.values.empty() &&
        sym_norm2(p.matrix() - out.values.back().matrix()) <=
            tol * sym_norm2(p.matrix());
    out.values.push_back(std::move(p));
    if (done) {
      out.solution.P = out.values.back();
      out.solution.K = out.gains.back();
      out.solution.residual =
          are_residual(a, b, q, r, out.solution.P.matrix());
      return out;
    }
  }
  throw NotConverged("kleinman_pi: no convergence within " +
                         std::to_string(max_iterations) + " iterations",
                     max_iterations);
}

double ViSchedule::epsilon(long k) const {
  return step_scale / std::pow(static_cast<double>(k) + 1.0, step_exponent);
}

double ViSchedule::bound(long r) const {
  return fixed_bound ? *fixed_bound : ball_base * static_cast<double>(r + 1);
}

SymMatrix ViSchedule::initial_value(Eigen::Index n) const {
  if (p0.dim() == 0) return SymMatrix::Identity(n);
  if (p0.dim() != n) {
    throw ConfigError("value iteration: P0 has the wrong dimension");
  }
  return p0;
}

void ViSchedule::validate() const {
  if (!(step_scale > 0.0)) {
    throw ConfigError("value iteration: step scale must be positive");
  }
  if (!(step_exponent > 0.0 && step_exponent <= 1.0)) {
    throw ConfigError(
        "value iteration: step exponent must lie in (0, 1] so that the steps "
        "vanish while their sum diverges");
  }
  if (fixed_bound ? !(*fixed_bound > 0.0) : !(ball_base > 0.0)) {
    throw ConfigError("value iteration: bounds must be positive");
  }
  if (!(threshold > 0.0)) {
    throw ConfigError("value iteration: threshold must be positive");
  }
  if (p0.dim() > 0 && !p0.is_positive_definite()) {
    throw ConfigError("value iteration: P0 must be positive definite");
  }
  if (max_iterations <= 0) {
    throw ConfigError("value iteration: iteration cap must be positive");
  }
}

void ViTrace::record(const ViTraceEntry& e, bool force) {
  if (force || e.reset || e.k < 1000 || e.k % 100 == 0) {
    entries.push_back(e);
  }
}

ViResult model_based_vi(const Matrix& a, const Matrix& b, const Matrix& q,
                        const Matrix& r, const ViSchedule& schedule) {
  check_problem(a, b, q, r);
  schedule.validate();
  const Eigen::Index n = a.rows();
  const Eigen::LLT<Matrix> r_llt(r);
  const Matrix g = b * r_llt.solve(b.transpose());
  const SymMatrix p0 = schedule.initial_value(n);

  ViResult out;
  Matrix p = p0.matrix();
  long resets = 0;
  double last_metric = 0.0;
  for (long k = 0; k < schedule.max_iterations; ++k) {
    const double eps = schedule.epsilon(k);
    Matrix ric = p * a + a.transpose() * p + q - p * g * p;
    ric = 0.5 * (ric + ric.transpose());
    const Matrix candidate = p + eps * ric;
    const double metric = sym_norm2(ric);
    double cand_norm = 0.0;
    const bool inside =
        in_psd_ball(candidate, schedule.bound(resets), &cand_norm);
    last_metric = metric;
    ViTraceEntry entry{k, eps, metric, cand_norm, resets, false};
    if (!inside) {
      p = p0.matrix();
      ++resets;
      entry.reset = true;
    } else {
      p = candidate;
    }
    const bool done = metric < schedule.threshold && !entry.reset;
    out.trace.record(entry, done);
    out.trace.iterations = k + 1;
    out.trace.resets = resets;
    if (done) {
      out.solution.P = SymMatrix(p, 1e-8);
      out.solution.K = r_llt.solve(b.transpose() * out.solution.P.matrix());
      out.solution.residual = are_residual(a, b, q, r, out.solution.P.matrix());
      return out;
    }
  }
  std::ostringstream os;
  os << "model_based_vi: no convergence within " << schedule.max_iterations
     << " iterations (last metric "
     << last_metric
     << ", resets " << resets << ")";
  throw NotConverged(os.str(), schedule.max_iterations);
}

}  // namespace ddvi
