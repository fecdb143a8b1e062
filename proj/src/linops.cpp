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

#include "ddvi/linops.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "ddvi/errors.hpp"

namespace ddvi {
namespace {

// PBH rank tests run on computed eigenvalues, which for defective eigenvalues
// carry O(sqrt(eps)) error, so they use a looser threshold than lstsq.
constexpr double kPbhTolerance = 1e-8;

void require_square(const Matrix& a, const char* what) {
  if (a.rows() != a.cols()) {
    throw std::invalid_argument(std::string(what) + ": matrix must be square");
  }
}

}  // namespace

SymMatrix::SymMatrix(const Matrix& m, double rel_tol) {
  require_square(m, "SymMatrix");
  const double scale = m.cwiseAbs().maxCoeff();
  const double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
  if (!(asym <= rel_tol * scale) && asym != 0.0) {
    throw std::invalid_argument("SymMatrix: asymmetry " + std::to_string(asym) +
                                " exceeds relative tolerance");
  }
  if (!m.allFinite()) {
    throw std::invalid_argument("SymMatrix: non-finite entries");
  }
  m_ = 0.5 * (m + m.transpose());
}

double SymMatrix::min_eigenvalue() const {
  if (m_.size() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Matrix> es(m_, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

bool SymMatrix::is_positive_definite() const {
  Eigen::LLT<Matrix> llt(m_);
  return llt.info() == Eigen::Success;
}

Vector vec(const Matrix& m) {
  return Eigen::Map<const Vector>(m.data(), m.size());
}

Matrix unvec(const Vector& v, Eigen::Index rows, Eigen::Index cols) {
  if (v.size() != rows * cols) {
    throw std::invalid_argument("unvec: size mismatch");
  }
  return Eigen::Map<const Matrix>(v.data(), rows, cols);
}

Vector vecs(const SymMatrix& p) {
  const Matrix& m = p.matrix();
  const Eigen::Index n = m.rows();
  Vector out(sym_size(n));
  Eigen::Index k = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    out(k++) = m(i, i);
    for (Eigen::Index j = i + 1; j < n; ++j) out(k++) = 2.0 * m(i, j);
  }
  return out;
}

Vector vecs(const Matrix& p) { return vecs(SymMatrix(p)); }

SymMatrix unvecs(const Vector& v, Eigen::Index dim) {
  if (v.size() != sym_size(dim)) {
    throw std::invalid_argument("unvecs: size mismatch");
  }
  Matrix m(dim, dim);
  Eigen::Index k = 0;
  for (Eigen::Index i = 0; i < dim; ++i) {
    m(i, i) = v(k++);
    for (Eigen::Index j = i + 1; j < dim; ++j) {
      m(i, j) = m(j, i) = 0.5 * v(k++);
    }
  }
  return SymMatrix(m);
}

void vecv_into(const Vector& v, Eigen::Ref<Vector> out) {
  const Eigen::Index n = v.size();
  Eigen::Index k = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i; j < n; ++j) out(k++) = v(i) * v(j);
  }
}

Vector vecv(const Vector& v) {
  Vector out(sym_size(v.size()));
  vecv_into(v, out);
  return out;
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

Matrix bdiag(std::span<const Matrix> blocks) {
  if (blocks.empty()) throw std::invalid_argument("bdiag: no blocks");
  Eigen::Index rows = 0, cols = 0;
  for (const Matrix& b : blocks) {
    rows += b.rows();
    cols += b.cols();
  }
  Matrix out = Matrix::Zero(rows, cols);
  Eigen::Index r = 0, c = 0;
  for (const Matrix& b : blocks) {
    out.block(r, c, b.rows(), b.cols()) = b;
    r += b.rows();
    c += b.cols();
  }
  return out;
}

Matrix bdiag(std::initializer_list<Matrix> blocks) {
  return bdiag(std::span<const Matrix>(blocks.begin(), blocks.size()));
}

ComplexVector spectrum(const Matrix& a) {
  require_square(a, "spectrum");
  Eigen::EigenSolver<Matrix> es(a, false);
  if (es.info() != Eigen::Success) {
    throw NumericalError("spectrum: eigenvalue iteration failed");
  }
  return es.eigenvalues();
}

double spectral_abscissa(const Matrix& a) {
  return spectrum(a).real().maxCoeff();
}

bool is_hurwitz(const Matrix& a, double tol) {
  require_square(a, "is_hurwitz");
  return spectral_abscissa(a) < -tol;
}

double norm2(const Matrix& a) {
  if (a.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(a);
  return svd.singularValues()(0);
}

double sym_norm2(const Matrix& a) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(a, Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

bool in_psd_ball(const Matrix& a, double bound, double* norm) {
  if (!a.allFinite()) {
    if (norm) *norm = std::numeric_limits<double>::infinity();
    return false;
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(a, Eigen::EigenvaluesOnly);
  const Vector& ev = es.eigenvalues();
  const double n2 = ev.cwiseAbs().maxCoeff();
  if (norm) *norm = n2;
  return ev.minCoeff() >= 0.0 && n2 <= bound;
}

long numerical_rank(const Matrix& m, double rel_tol) {
  if (m.size() == 0) return 0;
  Eigen::BDCSVD<Matrix> svd(m);
  const Vector& s = svd.singularValues();
  if (s.size() == 0 || s(0) == 0.0) return 0;
  return static_cast<long>((s.array() > rel_tol * s(0)).count());
}

long numerical_rank(const Eigen::MatrixXcd& m, double rel_tol) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
  const Vector s = svd.singularValues();
  if (s.size() == 0 || s(0) == 0.0) return 0;
  return static_cast<long>((s.array() > rel_tol * s(0)).count());
}

Vector equilibrate_columns(Matrix& m) {
  Vector scale(m.cols());
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    const double n = m.col(j).norm();
    scale(j) = n > 0.0 ? n : 1.0;
    m.col(j) /= scale(j);
  }
  return scale;
}

LeastSquares::LeastSquares(const Matrix& m, double rel_tol) {
  Eigen::BDCSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Vector& s = svd.singularValues();
  const double smax = s.size() > 0 ? s(0) : 0.0;
  rank_ = smax > 0.0 ? static_cast<long>((s.array() > rel_tol * smax).count())
                     : 0;
  if (rank_ < m.cols()) {
    throw RankDeficient("least-squares matrix is rank deficient", rank_,
                        m.cols());
  }
  cond_ = smax / s(s.size() - 1);
  pinv_ = svd.matrixV() * s.cwiseInverse().asDiagonal() *
          svd.matrixU().transpose();
}

Matrix lstsq(const Matrix& m, const Matrix& rhs) {
  if (m.rows() != rhs.rows()) {
    throw std::invalid_argument("lstsq: row mismatch");
  }
  return LeastSquares(m).solve(rhs);
}

Matrix null_space(const Matrix& m, double rel_tol) {
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullV);
  const Vector& s = svd.singularValues();
  const double smax = s.size() > 0 ? s(0) : 0.0;
  const long r =
      smax > 0.0 ? static_cast<long>((s.array() > rel_tol * smax).count()) : 0;
  return svd.matrixV().rightCols(m.cols() - r);
}

AffineQpSolution minimize_on_affine(const Matrix& h, const Matrix& m,
                                    const Vector& b, double rel_tol) {
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Vector& s = svd.singularValues();
  const double smax = s.size() > 0 ? s(0) : 0.0;
  const long r =
      smax > 0.0 ? static_cast<long>((s.array() > rel_tol * smax).count()) : 0;

  const Matrix ur = svd.matrixU().leftCols(r);
  const Matrix vr = svd.matrixV().leftCols(r);
  Vector z = vr * (s.head(r).cwiseInverse().asDiagonal() * (ur.transpose() * b));

  AffineQpSolution out;
  out.null_dim = m.cols() - r;
  if (out.null_dim > 0) {
    const Matrix n = svd.matrixV().rightCols(out.null_dim);
    const Matrix reduced = n.transpose() * h * n;
    Eigen::LDLT<Matrix> ldlt(reduced);
    if (ldlt.info() != Eigen::Success || !(ldlt.vectorD().array() > 0).all()) {
      throw NumericalError(
          "minimize_on_affine: objective not positive definite on the "
          "feasible subspace");
    }
    z += n * ldlt.solve(-(n.transpose() * (h * z)));
  }
  out.constraint_residual = (m * z - b).norm() / (1.0 + b.norm());
  out.z = std::move(z);
  return out;
}

namespace {

double reference_scale(const Matrix& a) {
  const double s = norm2(a);
  return s > 0.0 ? s : 1.0;
}

Matrix normalized_columns(const Matrix& b, double target) {
  Matrix out = b;
  for (Eigen::Index j = 0; j < out.cols(); ++j) {
    const double n = out.col(j).norm();
    if (n > 0.0) out.col(j) *= target / n;
  }
  return out;
}

}  // namespace

std::vector<std::complex<double>> unstabilizable_modes(const Matrix& a,
                                                       const Matrix& b,
                                                       double tol) {
  require_square(a, "unstabilizable_modes");
  const Eigen::Index n = a.rows();
  const double scale = reference_scale(a);
  const Eigen::MatrixXcd bs = normalized_columns(b, scale).cast<std::complex<double>>();
  std::vector<std::complex<double>> bad;
  const ComplexVector eig = spectrum(a);
  for (Eigen::Index k = 0; k < eig.size(); ++k) {
    if (eig(k).real() < -tol) continue;
    Eigen::MatrixXcd pbh(n, n + b.cols());
    pbh.leftCols(n) = a.cast<std::complex<double>>() -
                      eig(k) * Eigen::MatrixXcd::Identity(n, n);
    pbh.rightCols(b.cols()) = bs;
    if (numerical_rank(pbh, kPbhTolerance) < n) bad.push_back(eig(k));
  }
  return bad;
}

std::vector<std::complex<double>> unobservable_modes(const Matrix& c,
                                                     const Matrix& a) {
  require_square(a, "unobservable_modes");
  const Eigen::Index n = a.rows();
  const double scale = reference_scale(a);
  const Matrix cs = normalized_columns(c.transpose(), scale).transpose();
  std::vector<std::complex<double>> bad;
  const ComplexVector eig = spectrum(a);
  for (Eigen::Index k = 0; k < eig.size(); ++k) {
    Eigen::MatrixXcd pbh(n + c.rows(), n);
    pbh.topRows(n) = a.cast<std::complex<double>>() -
                     eig(k) * Eigen::MatrixXcd::Identity(n, n);
    pbh.bottomRows(c.rows()) = cs.cast<std::complex<double>>();
    if (numerical_rank(pbh, kPbhTolerance) < n) bad.push_back(eig(k));
  }
  return bad;
}

bool is_stabilizable(const Matrix& a, const Matrix& b, double tol) {
  return unstabilizable_modes(a, b, tol).empty();
}

bool is_observable(const Matrix& c, const Matrix& a) {
  return unobservable_modes(c, a).empty();
}

Matrix sqrtm_psd(const Matrix& q) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (q + q.transpose()));
  const Vector d = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * d.asDiagonal() * es.eigenvectors().transpose();
}

}  // namespace ddvi
