#pragma once

// Dense real linear algebra for symmetric operators: storage, cyclic Jacobi
// spectral decomposition, spectral calculus, Schatten norms, Cholesky solves
// and the Cholesky-reduced generalized eigenproblem.

#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <utility>
#include <vector>

#include "specfun/error.hpp"

namespace specfun::linalg {

using Vector = std::vector<double>;

// Column-major dense matrix.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static Matrix identity(std::size_t n);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  double& operator()(std::size_t i, std::size_t j) noexcept { return data_[j * rows_ + i]; }
  double operator()(std::size_t i, std::size_t j) const noexcept { return data_[j * rows_ + i]; }

  std::span<double> col(std::size_t j) noexcept { return {data_.data() + j * rows_, rows_}; }
  std::span<const double> col(std::size_t j) const noexcept {
    return {data_.data() + j * rows_, rows_};
  }

  std::span<double> data() noexcept { return data_; }
  std::span<const double> data() const noexcept { return data_; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

Matrix transpose(const Matrix& a);
Matrix multiply(const Matrix& a, const Matrix& b);
// aᵀ·b without forming the transpose.
Matrix multiply_at_b(const Matrix& a, const Matrix& b);
Vector multiply(const Matrix& a, std::span<const double> x);
Matrix operator+(const Matrix& a, const Matrix& b);
Matrix operator-(const Matrix& a, const Matrix& b);
Matrix operator*(double s, const Matrix& a);
double max_abs(const Matrix& a);
bool all_finite(const Matrix& a);

// Square matrix with entries(i,j) == entries(j,i) bit for bit. Construction
// from an arbitrary square matrix symmetrizes it as (A + Aᵀ)/2.
class SymMatrix {
 public:
  explicit SymMatrix(Matrix a);

  static SymMatrix zeros(std::size_t n);
  static SymMatrix identity(std::size_t n);
  static SymMatrix diagonal(std::span<const double> d);

  std::size_t size() const noexcept { return a_.rows(); }
  double operator()(std::size_t i, std::size_t j) const noexcept { return a_(i, j); }
  const Matrix& matrix() const noexcept { return a_; }

  // A + s·I
  SymMatrix shifted(double s) const;

 private:
  struct trusted_tag {};
  SymMatrix(Matrix a, trusted_tag) : a_(std::move(a)) {}
  Matrix a_;

  friend SymMatrix operator+(const SymMatrix& a, const SymMatrix& b);
  friend SymMatrix operator-(const SymMatrix& a, const SymMatrix& b);
  friend SymMatrix operator*(double s, const SymMatrix& a);
};

SymMatrix operator+(const SymMatrix& a, const SymMatrix& b);
SymMatrix operator-(const SymMatrix& a, const SymMatrix& b);
SymMatrix operator*(double s, const SymMatrix& a);
Vector multiply(const SymMatrix& a, std::span<const double> x);
// Qᵀ A Q, symmetrized.
SymMatrix congruence(const SymMatrix& a, const Matrix& q);
// Q A Qᵀ, symmetrized.
SymMatrix congruence_transposed(const SymMatrix& a, const Matrix& q);

struct SpectralDecomposition {
  Vector eigenvalues;  // ascending
  Matrix eigenvectors;  // column k pairs with eigenvalues[k]

  std::size_t size() const noexcept { return eigenvalues.size(); }
};

struct JacobiOptions {
  int max_sweeps = 60;
  // Stop when the off-diagonal Frobenius mass drops below this fraction of ‖A‖_F.
  double relative_tolerance = 1e-15;
};

// Cyclic Jacobi with row-wise pair order (p < q). Deterministic for fixed input.
SpectralDecomposition spectral_decompose(const SymMatrix& a, const JacobiOptions& opts = {});

// Diagonalizes Bᵀ A B instead of A and maps the rotations back, for callers
// that hold an orthonormal basis B which nearly diagonalizes A already.
SpectralDecomposition spectral_decompose(const SymMatrix& a, const Matrix& basis,
                                         const JacobiOptions& opts = {});

// Q·diag(values)·Qᵀ
SymMatrix synthesize(const SpectralDecomposition& dec, std::span<const double> values);

// Spectral calculus f(A) = Q·diag(f(λ))·Qᵀ. Throws NonFiniteValue when f is not
// finite on some eigenvalue.
template <class F>
SymMatrix matrix_function(const SpectralDecomposition& dec, F&& f) {
  Vector values(dec.size());
  for (std::size_t k = 0; k < dec.size(); ++k) {
    values[k] = f(dec.eigenvalues[k]);
    if (!std::isfinite(values[k])) {
      throw Error(ErrorCode::NonFiniteValue, "function is not finite on an eigenvalue");
    }
  }
  return synthesize(dec, values);
}

double hs_norm(const Matrix& a);
double hs_norm(const SymMatrix& a);

// (Σ|λ_k|^p)^{1/p}; p = infinity gives max |λ_k|.
double schatten_norm(const SpectralDecomposition& dec, double p);
inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

class Cholesky {
 public:
  // Throws NotPositiveDefinite on a nonpositive pivot.
  explicit Cholesky(const SymMatrix& a);

  std::size_t size() const noexcept { return l_.rows(); }
  const Matrix& lower() const noexcept { return l_; }

  Vector solve(std::span<const double> b) const;
  // L y = b
  Vector solve_lower(std::span<const double> b) const;
  // Lᵀ x = y
  Vector solve_upper(std::span<const double> y) const;

 private:
  Matrix l_;
};

Vector solve_spd(const SymMatrix& a, std::span<const double> b);

struct GeneralizedEigen {
  Vector eigenvalues;  // ascending
  Matrix vectors;      // K ψ_k = λ_k M ψ_k, Ψᵀ M Ψ = I
};

GeneralizedEigen generalized_eig(const SymMatrix& k, const SymMatrix& m,
                                 const JacobiOptions& opts = {});

double norm2(std::span<const double> x);

}  // namespace specfun::linalg
