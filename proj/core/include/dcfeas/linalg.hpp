#pragma once

// Dense linear algebra used by the solvers: row-major matrices, level-1/2
// kernels, thin Householder QR and a power-iteration spectral norm.

#include <cstddef>
#include <span>
#include <vector>

namespace dcfeas {

using Vector = std::vector<double>;

class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0);
  DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> row_major);

  static DenseMatrix identity(std::size_t n);
  static DenseMatrix from_rows(const std::vector<std::vector<double>>& rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<const double> row(std::size_t i) const {
    return {data_.data() + i * cols_, cols_};
  }
  std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }

  const std::vector<double>& data() const { return data_; }
  std::vector<double>& data() { return data_; }

  DenseMatrix transpose() const;
  bool all_finite() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

double dot(std::span<const double> x, std::span<const double> y);
double norm2(std::span<const double> x);
double norm_inf(std::span<const double> x);
/// y += alpha * x
void axpy(double alpha, std::span<const double> x, std::span<double> y);
Vector subtract(std::span<const double> x, std::span<const double> y);
/// (1 - t) x + t y
Vector lerp(std::span<const double> x, std::span<const double> y, double t);

/// a * x
Vector matvec(const DenseMatrix& a, std::span<const double> x);
/// a^T * y
Vector matvec_t(const DenseMatrix& a, std::span<const double> y);
/// a * x - b
Vector residual(const DenseMatrix& a, std::span<const double> x, std::span<const double> b);
DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b);
double frobenius_norm(const DenseMatrix& a);

/// Thin Householder QR of an m x n matrix with m >= n. Reflector k acts on
/// rows k..m-1 and is stored as (v, tau) with H_k = I - tau v v^T, v[0] = 1.
struct QRFactorization {
  std::vector<Vector> reflectors;
  Vector taus;
  Vector signs;   // +-1 per column, chosen so that diag(R) > 0
  DenseMatrix r;  // n x n upper triangular
  std::size_t source_rows = 0;
  std::size_t source_cols = 0;

  /// Q z for z of length n (thin Q, result length m).
  Vector apply_q(std::span<const double> z) const;
  /// First n entries of Q^T y for y of length m.
  Vector apply_qt(std::span<const double> y) const;
  /// The explicit m x n thin Q.
  DenseMatrix thin_q() const;
};

/// Throws RankDeficientError when |R_kk| < 1e-12 * max_j ||m_{:,j}||.
QRFactorization householder_qr(const DenseMatrix& m);

/// x = a^T (a a^T)^{-1} b given the QR factorization of a^T.
Vector least_norm_from_qr(const QRFactorization& qr_of_at, std::span<const double> b);

/// Minimum-norm solution of a x = b for full-row-rank a (via QR of a^T).
Vector least_norm_solution(const DenseMatrix& a, std::span<const double> b);

/// Largest singular value by power iteration on a^T a. Stops when the
/// relative change of the estimate drops below tol or after max_iter steps.
double spectral_norm(const DenseMatrix& a, double tol = 1e-8, int max_iter = 500);

}  // namespace dcfeas
