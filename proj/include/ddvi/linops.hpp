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

#ifndef DDVI_LINOPS_HPP_
#define DDVI_LINOPS_HPP_

#include <complex>
#include <initializer_list>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace ddvi {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using ComplexVector = Eigen::VectorXcd;

inline constexpr double kHurwitzTolerance = 1e-10;
inline constexpr double kRankTolerance = 1e-10;
inline constexpr double kSymmetryTolerance = 1e-12;

/// Symmetric real matrix. Construction checks symmetry to a relative
/// tolerance and stores the symmetric part (P + P^T) / 2.
class SymMatrix {
 public:
  SymMatrix() = default;
  explicit SymMatrix(const Matrix& m, double rel_tol = kSymmetryTolerance);

  static SymMatrix Identity(Eigen::Index n) {
    return SymMatrix(Matrix::Identity(n, n));
  }
  static SymMatrix Zero(Eigen::Index n) {
    return SymMatrix(Matrix::Zero(n, n));
  }

  const Matrix& matrix() const { return m_; }
  operator const Matrix&() const { return m_; }  // NOLINT
  Eigen::Index dim() const { return m_.rows(); }
  double operator()(Eigen::Index i, Eigen::Index j) const { return m_(i, j); }

  /// Smallest eigenvalue.
  double min_eigenvalue() const;
  bool is_positive_definite() const;

 private:
  Matrix m_;
};

// Vectorization maps.
//   vec:  columns stacked top to bottom.
//   vecs: upper triangle scanned row-wise, off-diagonal entries doubled.
//   vecv: quadratic monomials v_i v_j, i <= j, in the same scan order,
//         so that v^T P v == vecv(v).dot(vecs(P)).
Vector vec(const Matrix& m);
Matrix unvec(const Vector& v, Eigen::Index rows, Eigen::Index cols);
Vector vecs(const Matrix& p);
Vector vecs(const SymMatrix& p);
SymMatrix unvecs(const Vector& v, Eigen::Index dim);
Vector vecv(const Vector& v);
void vecv_into(const Vector& v, Eigen::Ref<Vector> out);

constexpr Eigen::Index sym_size(Eigen::Index n) { return n * (n + 1) / 2; }

Matrix kron(const Matrix& a, const Matrix& b);
Matrix bdiag(std::span<const Matrix> blocks);
Matrix bdiag(std::initializer_list<Matrix> blocks);

ComplexVector spectrum(const Matrix& a);
/// max Re(lambda) over the spectrum.
double spectral_abscissa(const Matrix& a);
bool is_hurwitz(const Matrix& a, double tol = kHurwitzTolerance);

/// Induced 2-norm.
double norm2(const Matrix& a);
/// Induced 2-norm of a symmetric matrix (largest |eigenvalue|).
double sym_norm2(const Matrix& a);
/// True when the symmetric matrix is finite, PSD and has norm <= bound.
/// The norm is written to *norm when given.
bool in_psd_ball(const Matrix& a, double bound, double* norm = nullptr);

/// Number of singular values above rel_tol * sigma_max.
long numerical_rank(const Matrix& m, double rel_tol = kRankTolerance);
long numerical_rank(const Eigen::MatrixXcd& m, double rel_tol = kRankTolerance);

/// Scales each column to unit 2-norm (zero columns are left alone) and returns
/// the scale factors, so that m == scaled * diag(1 / scale).
Vector equilibrate_columns(Matrix& m);

/// Least-squares solve of M Z = rhs via SVD. Throws RankDeficient when M has
/// numerical rank below its column count.
Matrix lstsq(const Matrix& m, const Matrix& rhs);

/// Factor-once least-squares solver for a fixed full-column-rank matrix.
class LeastSquares {
 public:
  explicit LeastSquares(const Matrix& m, double rel_tol = kRankTolerance);
  long rank() const { return rank_; }
  /// Pseudo-inverse M^+ (cols x rows).
  const Matrix& pinv() const { return pinv_; }
  Matrix solve(const Matrix& rhs) const { return pinv_ * rhs; }
  double condition_number() const { return cond_; }

 private:
  Matrix pinv_;
  long rank_ = 0;
  double cond_ = 0.0;
};

/// Orthonormal basis for ker(M), as columns.
Matrix null_space(const Matrix& m, double rel_tol = kRankTolerance);

/// Minimize z^T H z subject to M z = b with H symmetric positive definite
/// on ker(M). Uses the min-norm particular solution plus a reduced
/// Hessian solve on the null space.
struct AffineQpSolution {
  Vector z;
  double constraint_residual = 0.0;  // ||M z - b|| / (1 + ||b||)
  long null_dim = 0;                 // 0 when the feasible set is a point
};
AffineQpSolution minimize_on_affine(const Matrix& h, const Matrix& m,
                                    const Vector& b,
                                    double rel_tol = kRankTolerance);

// PBH tests. Input columns / output rows are normalised so the verdicts do not
// depend on their physical scale.
/// Eigenvalues of A with Re(lambda) >= -tol that are not controllable.
std::vector<std::complex<double>> unstabilizable_modes(
    const Matrix& a, const Matrix& b, double tol = kHurwitzTolerance);
std::vector<std::complex<double>> unobservable_modes(const Matrix& c,
                                                     const Matrix& a);
bool is_stabilizable(const Matrix& a, const Matrix& b,
                     double tol = kHurwitzTolerance);
bool is_observable(const Matrix& c, const Matrix& a);

/// Symmetric PSD square root.
Matrix sqrtm_psd(const Matrix& q);

}  // namespace ddvi

#endif  // DDVI_LINOPS_HPP_
