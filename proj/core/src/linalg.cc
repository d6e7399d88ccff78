#include "dcfeas/linalg.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <random>
#include <string>

#include "dcfeas/errors.hpp"

namespace dcfeas {

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> row_major)
    : rows_(rows), cols_(cols), data_(std::move(row_major)) {
  if (data_.size() != rows_ * cols_) {
    throw Error(ErrorCode::kInvalidArgument,
                "DenseMatrix: entry count " + std::to_string(data_.size()) +
                    " does not match shape " + std::to_string(rows_) + "x" +
                    std::to_string(cols_));
  }
}

DenseMatrix DenseMatrix::identity(std::size_t n) {
  DenseMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

DenseMatrix DenseMatrix::from_rows(const std::vector<std::vector<double>>& rows) {
  const std::size_t r = rows.size();
  const std::size_t c = r == 0 ? 0 : rows.front().size();
  DenseMatrix m(r, c);
  for (std::size_t i = 0; i < r; ++i) {
    if (rows[i].size() != c) {
      throw Error(ErrorCode::kInvalidArgument, "DenseMatrix::from_rows: ragged input");
    }
    std::copy(rows[i].begin(), rows[i].end(), m.row(i).begin());
  }
  return m;
}

DenseMatrix DenseMatrix::transpose() const {
  DenseMatrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  }
  return t;
}

bool DenseMatrix::all_finite() const {
  return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

double dot(std::span<const double> x, std::span<const double> y) {
  assert(x.size() == y.size());
  // Four independent partial sums keep the FP pipeline busy.
  const std::size_t n = x.size();
  double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    s0 += x[i] * y[i];
    s1 += x[i + 1] * y[i + 1];
    s2 += x[i + 2] * y[i + 2];
    s3 += x[i + 3] * y[i + 3];
  }
  for (; i < n; ++i) s0 += x[i] * y[i];
  return (s0 + s1) + (s2 + s3);
}

double norm2(std::span<const double> x) {
  const double plain = dot(x, x);
  if (plain > 1e-280 && plain < 1e280) return std::sqrt(plain);
  // Scaled accumulation for extreme magnitudes.
  double scale = 0.0;
  for (double v : x) scale = std::max(scale, std::abs(v));
  if (scale == 0.0 || !std::isfinite(scale)) return scale;
  double s = 0.0;
  for (double v : x) {
    const double t = v / scale;
    s += t * t;
  }
  return scale * std::sqrt(s);
}

double norm_inf(std::span<const double> x) {
  double m = 0.0;
  for (double v : x) m = std::max(m, std::abs(v));
  return m;
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  assert(x.size() == y.size());
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

Vector subtract(std::span<const double> x, std::span<const double> y) {
  assert(x.size() == y.size());
  Vector out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] - y[i];
  return out;
}

Vector lerp(std::span<const double> x, std::span<const double> y, double t) {
  assert(x.size() == y.size());
  Vector out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = (1.0 - t) * x[i] + t * y[i];
  return out;
}

Vector matvec(const DenseMatrix& a, std::span<const double> x) {
  assert(a.cols() == x.size());
  Vector out(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) out[i] = dot(a.row(i), x);
  return out;
}

Vector matvec_t(const DenseMatrix& a, std::span<const double> y) {
  assert(a.rows() == y.size());
  Vector out(a.cols(), 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    if (y[i] != 0.0) axpy(y[i], a.row(i), out);
  }
  return out;
}

Vector residual(const DenseMatrix& a, std::span<const double> x, std::span<const double> b) {
  assert(a.rows() == b.size());
  Vector out(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) out[i] = dot(a.row(i), x) - b[i];
  return out;
}

DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.cols() != b.rows()) {
    throw Error(ErrorCode::kInvalidArgument, "matmul: inner dimensions differ");
  }
  DenseMatrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik != 0.0) axpy(aik, b.row(k), c.row(i));
    }
  }
  return c;
}

double frobenius_norm(const DenseMatrix& a) { return norm2(a.data()); }

namespace {

// Applies H = I - tau v v^T (v acting on rows offset..) to y in place.
void apply_reflector(std::span<const double> v, double tau, std::size_t offset,
                     std::span<double> y) {
  if (tau == 0.0) return;
  auto tail = y.subspan(offset);
  const double s = tau * dot(v, tail);
  axpy(-s, v, tail);
}

}  // namespace

Vector QRFactorization::apply_q(std::span<const double> z) const {
  assert(z.size() == source_cols);
  Vector y(source_rows, 0.0);
  for (std::size_t j = 0; j < source_cols; ++j) y[j] = signs[j] * z[j];
  for (std::size_t k = source_cols; k-- > 0;) apply_reflector(reflectors[k], taus[k], k, y);
  return y;
}

Vector QRFactorization::apply_qt(std::span<const double> y) const {
  assert(y.size() == source_rows);
  Vector w(y.begin(), y.end());
  for (std::size_t k = 0; k < source_cols; ++k) apply_reflector(reflectors[k], taus[k], k, w);
  w.resize(source_cols);
  for (std::size_t j = 0; j < source_cols; ++j) w[j] *= signs[j];
  return w;
}

DenseMatrix QRFactorization::thin_q() const {
  DenseMatrix q(source_rows, source_cols);
  Vector e(source_cols, 0.0);
  for (std::size_t j = 0; j < source_cols; ++j) {
    e[j] = 1.0;
    const Vector col = apply_q(e);
    for (std::size_t i = 0; i < source_rows; ++i) q(i, j) = col[i];
    e[j] = 0.0;
  }
  return q;
}

QRFactorization householder_qr(const DenseMatrix& m) {
  const std::size_t rows = m.rows();
  const std::size_t cols = m.cols();
  if (rows < cols || cols == 0) {
    throw Error(ErrorCode::kInvalidArgument,
                "householder_qr: need rows >= cols > 0, got " + std::to_string(rows) + "x" +
                    std::to_string(cols));
  }

  // Column-major working copy so every reflector touches contiguous memory.
  std::vector<Vector> work(cols, Vector(rows));
  double scale = 0.0;
  for (std::size_t j = 0; j < cols; ++j) {
    for (std::size_t i = 0; i < rows; ++i) work[j][i] = m(i, j);
    scale = std::max(scale, norm2(work[j]));
  }
  const double threshold = 1e-12 * scale;

  QRFactorization qr;
  qr.source_rows = rows;
  qr.source_cols = cols;
  qr.reflectors.resize(cols);
  qr.taus.assign(cols, 0.0);
  qr.signs.assign(cols, 1.0);
  qr.r = DenseMatrix(cols, cols);

  for (std::size_t k = 0; k < cols; ++k) {
    std::span<double> x = std::span<double>(work[k]).subspan(k);
    const double alpha = x[0];
    const double xnorm = norm2(x);
    Vector v(x.begin(), x.end());
    double beta = 0.0;
    double tau = 0.0;
    if (xnorm > 0.0) {
      beta = alpha >= 0.0 ? -xnorm : xnorm;
      tau = (beta - alpha) / beta;
      const double inv = 1.0 / (alpha - beta);
      for (std::size_t i = 1; i < v.size(); ++i) v[i] *= inv;
    }
    v[0] = 1.0;
    if (std::abs(beta) < threshold || xnorm == 0.0) {
      throw RankDeficientError(k, std::abs(beta), threshold);
    }
    qr.r(k, k) = beta;
    for (std::size_t j = k + 1; j < cols; ++j) {
      apply_reflector(v, tau, k, work[j]);
      qr.r(k, j) = work[j][k];
    }
    qr.reflectors[k] = std::move(v);
    qr.taus[k] = tau;
  }
  // Flip signs so R has a positive diagonal (the unique thin QR).
  for (std::size_t k = 0; k < cols; ++k) {
    if (qr.r(k, k) < 0.0) {
      qr.signs[k] = -1.0;
      for (std::size_t j = k; j < cols; ++j) qr.r(k, j) = -qr.r(k, j);
    }
  }
  return qr;
}

Vector least_norm_from_qr(const QRFactorization& qr, std::span<const double> b) {
  const std::size_t n = qr.source_cols;
  if (b.size() != n) {
    throw Error(ErrorCode::kInvalidArgument, "least_norm_from_qr: rhs length mismatch");
  }
  // a = R^T Q^T, so solve R^T z = b by forward substitution and return Q z.
  Vector z(n);
  for (std::size_t i = 0; i < n; ++i) {
    double s = b[i];
    for (std::size_t j = 0; j < i; ++j) s -= qr.r(j, i) * z[j];
    z[i] = s / qr.r(i, i);
  }
  return qr.apply_q(z);
}

Vector least_norm_solution(const DenseMatrix& a, std::span<const double> b) {
  if (a.rows() != b.size()) {
    throw Error(ErrorCode::kInvalidArgument, "least_norm_solution: rhs length mismatch");
  }
  return least_norm_from_qr(householder_qr(a.transpose()), b);
}

double spectral_norm(const DenseMatrix& a, double tol, int max_iter) {
  if (a.rows() == 0 || a.cols() == 0) return 0.0;
  // Fixed-seed start vector: deterministic, and almost surely not orthogonal
  // to the leading right singular vector.
  std::mt19937_64 gen(0x5eed);
  std::uniform_real_distribution<double> dist(0.5, 1.5);
  Vector v(a.cols());
  for (double& e : v) e = dist(gen);
  double nv = norm2(v);
  for (double& e : v) e /= nv;

  double estimate = 0.0;
  for (int it = 0; it < max_iter; ++it) {
    Vector w = matvec_t(a, matvec(a, v));
    const double nw = norm2(w);
    if (nw == 0.0) return 0.0;
    const double next = std::sqrt(nw);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = w[i] / nw;
    if (it > 0 && std::abs(next - estimate) <= tol * next) {
      estimate = next;
      break;
    }
    estimate = next;
  }
  return estimate;
}

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "invalid_argument";
    case ErrorCode::kRankDeficient: return "rank_deficient";
    case ErrorCode::kInfeasibleStart: return "infeasible_start";
    case ErrorCode::kUnsupported: return "unsupported";
    case ErrorCode::kRetractionFailed: return "retraction_failed";
    case ErrorCode::kLineSearchExhausted: return "line_search_exhausted";
    case ErrorCode::kSubproblemNoRoot: return "subproblem_no_root";
    case ErrorCode::kMissingGroundTruth: return "missing_ground_truth";
    case ErrorCode::kIo: return "io";
  }
  return "unknown";
}

RankDeficientError::RankDeficientError(std::size_t pivot, double magnitude, double threshold)
    : Error(ErrorCode::kRankDeficient,
            "householder_qr: rank deficiency at pivot " + std::to_string(pivot) + " (|R_kk| = " +
                std::to_string(magnitude) + " < " + std::to_string(threshold) + ")"),
      pivot_(pivot),
      magnitude_(magnitude) {}

}  // namespace dcfeas
