#include <algorithm>
#include <cmath>

#include "specfun/linalg.hpp"
#include "specfun/simd.hpp"

namespace specfun::linalg {
namespace {

void require_same_shape(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "matrix shapes differ");
  }
}

}  // namespace

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix transpose(const Matrix& a) {
  Matrix t(a.cols(), a.rows());
  for (std::size_t j = 0; j < a.cols(); ++j)
    for (std::size_t i = 0; i < a.rows(); ++i) t(j, i) = a(i, j);
  return t;
}

Matrix multiply(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) throw Error(ErrorCode::DimensionMismatch, "inner dimensions differ");
  Matrix c(a.rows(), b.cols());
  for (std::size_t j = 0; j < b.cols(); ++j) {
    auto cj = c.col(j);
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double bkj = b(k, j);
      if (bkj != 0.0) simd::axpy(bkj, a.col(k), cj);
    }
  }
  return c;
}

Matrix multiply_at_b(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows()) throw Error(ErrorCode::DimensionMismatch, "row counts differ");
  Matrix c(a.cols(), b.cols());
  for (std::size_t j = 0; j < b.cols(); ++j)
    for (std::size_t i = 0; i < a.cols(); ++i) c(i, j) = simd::dot(a.col(i), b.col(j));
  return c;
}

Vector multiply(const Matrix& a, std::span<const double> x) {
  if (a.cols() != x.size()) throw Error(ErrorCode::DimensionMismatch, "vector length differs");
  Vector y(a.rows(), 0.0);
  for (std::size_t k = 0; k < a.cols(); ++k) {
    if (x[k] != 0.0) simd::axpy(x[k], a.col(k), y);
  }
  return y;
}

Matrix operator+(const Matrix& a, const Matrix& b) {
  require_same_shape(a, b);
  Matrix c = a;
  simd::axpy(1.0, b.data(), c.data());
  return c;
}

Matrix operator-(const Matrix& a, const Matrix& b) {
  require_same_shape(a, b);
  Matrix c = a;
  simd::axpy(-1.0, b.data(), c.data());
  return c;
}

Matrix operator*(double s, const Matrix& a) {
  Matrix c = a;
  simd::scale(s, c.data());
  return c;
}

double max_abs(const Matrix& a) {
  double m = 0.0;
  for (double v : a.data()) m = std::max(m, std::abs(v));
  return m;
}

bool all_finite(const Matrix& a) {
  return std::all_of(a.data().begin(), a.data().end(), [](double v) { return std::isfinite(v); });
}

SymMatrix::SymMatrix(Matrix a) : a_(std::move(a)) {
  if (a_.rows() != a_.cols()) throw Error(ErrorCode::DimensionMismatch, "symmetric matrix must be square");
  if (a_.rows() == 0) throw Error(ErrorCode::InvalidArgument, "symmetric matrix must have n >= 1");
  const std::size_t n = a_.rows();
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = j + 1; i < n; ++i) {
      const double avg = 0.5 * (a_(i, j) + a_(j, i));
      a_(i, j) = avg;
      a_(j, i) = avg;
    }
  }
}

SymMatrix SymMatrix::zeros(std::size_t n) { return SymMatrix(Matrix(n, n)); }

SymMatrix SymMatrix::identity(std::size_t n) { return SymMatrix(Matrix::identity(n)); }

SymMatrix SymMatrix::diagonal(std::span<const double> d) {
  Matrix m(d.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return SymMatrix(std::move(m));
}

SymMatrix SymMatrix::shifted(double s) const {
  Matrix m = a_;
  for (std::size_t i = 0; i < size(); ++i) m(i, i) += s;
  return SymMatrix(std::move(m), trusted_tag{});
}

SymMatrix operator+(const SymMatrix& a, const SymMatrix& b) {
  return SymMatrix(a.a_ + b.a_, SymMatrix::trusted_tag{});
}

SymMatrix operator-(const SymMatrix& a, const SymMatrix& b) {
  return SymMatrix(a.a_ - b.a_, SymMatrix::trusted_tag{});
}

SymMatrix operator*(double s, const SymMatrix& a) { return SymMatrix(s * a.a_, SymMatrix::trusted_tag{}); }

Vector multiply(const SymMatrix& a, std::span<const double> x) { return multiply(a.matrix(), x); }

SymMatrix congruence(const SymMatrix& a, const Matrix& q) {
  return SymMatrix(multiply_at_b(q, multiply(a.matrix(), q)));
}

SymMatrix congruence_transposed(const SymMatrix& a, const Matrix& q) {
  return SymMatrix(multiply(q, multiply(a.matrix(), transpose(q))));
}

double hs_norm(const Matrix& a) {
  if (!all_finite(a)) throw Error(ErrorCode::NonFiniteEntry, "matrix has non-finite entries");
  // Scaled accumulation keeps tiny and huge entries from under/overflowing.
  const double scale = max_abs(a);
  if (scale == 0.0) return 0.0;
  double acc = 0.0;
  for (double v : a.data()) {
    const double r = v / scale;
    acc += r * r;
  }
  return scale * std::sqrt(acc);
}

double hs_norm(const SymMatrix& a) { return hs_norm(a.matrix()); }

double norm2(std::span<const double> x) { return std::sqrt(simd::dot(x, x)); }

}  // namespace specfun::linalg
