#include <cmath>
#include <string>

#include "specfun/linalg.hpp"
#include "specfun/simd.hpp"

namespace specfun::linalg {

Cholesky::Cholesky(const SymMatrix& a) : l_(a.size(), a.size()) {
  if (!all_finite(a.matrix())) throw Error(ErrorCode::NonFiniteEntry, "matrix has non-finite entries");
  const std::size_t n = a.size();
  // Right-looking column update; the working lower triangle lives in l_.
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = j; i < n; ++i) l_(i, j) = a(i, j);
  for (std::size_t j = 0; j < n; ++j) {
    const double d = l_(j, j);
    if (!(d > 0.0)) {
      throw Error(ErrorCode::NotPositiveDefinite, "nonpositive pivot at column " + std::to_string(j));
    }
    const double r = std::sqrt(d);
    auto cj = l_.col(j).subspan(j);
    simd::scale(1.0 / r, cj);
    for (std::size_t k = j + 1; k < n; ++k) {
      const double lkj = l_(k, j);
      if (lkj != 0.0) simd::axpy(-lkj, l_.col(j).subspan(k), l_.col(k).subspan(k));
    }
  }
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < j; ++i) l_(i, j) = 0.0;
}

Vector Cholesky::solve_lower(std::span<const double> b) const {
  const std::size_t n = size();
  if (b.size() != n) throw Error(ErrorCode::DimensionMismatch, "right-hand side length differs");
  Vector y(b.begin(), b.end());
  for (std::size_t j = 0; j < n; ++j) {
    y[j] /= l_(j, j);
    if (y[j] != 0.0 && j + 1 < n) {
      simd::axpy(-y[j], l_.col(j).subspan(j + 1), std::span<double>(y).subspan(j + 1));
    }
  }
  return y;
}

Vector Cholesky::solve_upper(std::span<const double> y) const {
  const std::size_t n = size();
  if (y.size() != n) throw Error(ErrorCode::DimensionMismatch, "right-hand side length differs");
  Vector x(y.begin(), y.end());
  for (std::size_t j = n; j-- > 0;) {
    const auto lj = l_.col(j).subspan(j + 1);
    x[j] = (x[j] - simd::dot(lj, std::span<const double>(x).subspan(j + 1))) / l_(j, j);
  }
  return x;
}

Vector Cholesky::solve(std::span<const double> b) const { return solve_upper(solve_lower(b)); }

Vector solve_spd(const SymMatrix& a, std::span<const double> b) { return Cholesky(a).solve(b); }

GeneralizedEigen generalized_eig(const SymMatrix& k, const SymMatrix& m, const JacobiOptions& opts) {
  if (k.size() != m.size()) throw Error(ErrorCode::DimensionMismatch, "K and M differ in size");
  const Cholesky chol(m);
  const std::size_t n = k.size();

  // C = L⁻¹ K L⁻ᵀ, built as L⁻¹ (L⁻¹ K)ᵀ since K is symmetric.
  Matrix x(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    const Vector col = chol.solve_lower(k.matrix().col(j));
    std::copy(col.begin(), col.end(), x.col(j).begin());
  }
  const Matrix xt = transpose(x);
  Matrix c(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    const Vector col = chol.solve_lower(xt.col(j));
    std::copy(col.begin(), col.end(), c.col(j).begin());
  }
  const SpectralDecomposition dec = spectral_decompose(SymMatrix(std::move(c)), opts);

  GeneralizedEigen out;
  out.eigenvalues = dec.eigenvalues;
  out.vectors = Matrix(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    const Vector psi = chol.solve_upper(dec.eigenvectors.col(j));
    std::copy(psi.begin(), psi.end(), out.vectors.col(j).begin());
  }
  return out;
}

}  // namespace specfun::linalg
