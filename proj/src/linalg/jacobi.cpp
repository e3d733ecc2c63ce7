#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "specfun/linalg.hpp"
#include "specfun/simd.hpp"

namespace specfun::linalg {
namespace {

double off_diagonal_norm(const Matrix& a) {
  const std::size_t n = a.rows();
  double acc = 0.0;
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = j + 1; i < n; ++i) acc += a(i, j) * a(i, j);
  return std::sqrt(2.0 * acc);
}

// Applies Jᵀ A J for the rotation zeroing a(p,q), and V ← V J.
// Columns p,q of A are rotated with the contiguous kernel; rows p,q then
// follow by symmetry and the 2×2 pivot block is set from the closed form.
void rotate_pair(Matrix& a, Matrix& v, std::size_t p, std::size_t q) {
  const double apq = a(p, q);
  const double app = a(p, p);
  const double aqq = a(q, q);
  const double theta = (aqq - app) / (2.0 * apq);
  double t;
  if (std::abs(theta) > 1e150) {
    t = 0.5 / theta;
  } else {
    t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(1.0 + theta * theta));
  }
  const double c = 1.0 / std::sqrt(1.0 + t * t);
  const double s = t * c;

  simd::rotate(a.col(p), a.col(q), c, s);
  const std::size_t n = a.rows();
  for (std::size_t k = 0; k < n; ++k) {
    a(p, k) = a(k, p);
    a(q, k) = a(k, q);
  }
  a(p, p) = app - t * apq;
  a(q, q) = aqq + t * apq;
  a(p, q) = 0.0;
  a(q, p) = 0.0;

  simd::rotate(v.col(p), v.col(q), c, s);
}

void jacobi_in_place(Matrix& a, Matrix& v, const JacobiOptions& opts) {
  const std::size_t n = a.rows();
  if (n < 2) return;
  double frob = 0.0;
  for (double x : a.data()) frob += x * x;
  frob = std::sqrt(frob);
  if (frob == 0.0) return;
  const double target = opts.relative_tolerance * frob;

  for (int sweep = 0; sweep < opts.max_sweeps; ++sweep) {
    const double off = off_diagonal_norm(a);
    if (off <= target || off == 0.0) return;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        // Once the pivot is negligible against both diagonal entries the
        // rotation would be the identity in floating point.
        const double g = 100.0 * std::abs(apq);
        if (sweep > 3 && std::abs(a(p, p)) + g == std::abs(a(p, p)) &&
            std::abs(a(q, q)) + g == std::abs(a(q, q))) {
          a(p, q) = 0.0;
          a(q, p) = 0.0;
          continue;
        }
        rotate_pair(a, v, p, q);
      }
    }
  }
  const double off = off_diagonal_norm(a);
  if (off > target && off != 0.0) {
    throw Error(ErrorCode::NoConvergence,
                "Jacobi did not converge in " + std::to_string(opts.max_sweeps) + " sweeps");
  }
}

SpectralDecomposition finish(const Matrix& a, Matrix v) {
  const std::size_t n = a.rows();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return a(i, i) < a(j, j); });

  SpectralDecomposition dec;
  dec.eigenvalues.resize(n);
  dec.eigenvectors = Matrix(v.rows(), n);
  for (std::size_t k = 0; k < n; ++k) {
    dec.eigenvalues[k] = a(order[k], order[k]);
    auto src = v.col(order[k]);
    auto dst = dec.eigenvectors.col(k);
    std::copy(src.begin(), src.end(), dst.begin());
    // Sign convention: the first clearly nonzero component is positive.
    double peak = 0.0;
    for (double x : dst) peak = std::max(peak, std::abs(x));
    for (double x : dst) {
      if (std::abs(x) > 1e-8 * peak) {
        if (x < 0.0) simd::scale(-1.0, dst);
        break;
      }
    }
  }
  return dec;
}

}  // namespace

SpectralDecomposition spectral_decompose(const SymMatrix& a, const JacobiOptions& opts) {
  if (!all_finite(a.matrix())) throw Error(ErrorCode::NonFiniteEntry, "matrix has non-finite entries");
  Matrix work = a.matrix();
  Matrix v = Matrix::identity(a.size());
  jacobi_in_place(work, v, opts);
  return finish(work, std::move(v));
}

SpectralDecomposition spectral_decompose(const SymMatrix& a, const Matrix& basis,
                                         const JacobiOptions& opts) {
  if (basis.rows() != a.size() || basis.cols() != a.size()) {
    throw Error(ErrorCode::DimensionMismatch, "basis must be n x n");
  }
  if (!all_finite(a.matrix())) throw Error(ErrorCode::NonFiniteEntry, "matrix has non-finite entries");
  Matrix work = congruence(a, basis).matrix();
  Matrix v = basis;
  jacobi_in_place(work, v, opts);
  return finish(work, std::move(v));
}

SymMatrix synthesize(const SpectralDecomposition& dec, std::span<const double> values) {
  const std::size_t n = dec.eigenvectors.rows();
  Matrix out(n, n);
  // Accumulate only the lower triangle per column, then mirror.
  for (std::size_t k = 0; k < dec.size(); ++k) {
    const double w = values[k];
    if (w == 0.0) continue;
    auto qk = dec.eigenvectors.col(k);
    for (std::size_t j = 0; j < n; ++j) {
      const double s = w * qk[j];
      if (s == 0.0) continue;
      simd::axpy(s, qk.subspan(j), out.col(j).subspan(j));
    }
  }
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = j + 1; i < n; ++i) out(j, i) = out(i, j);
  return SymMatrix(std::move(out));
}

double schatten_norm(const SpectralDecomposition& dec, double p) {
  if (!(p >= 1.0)) throw Error(ErrorCode::InvalidExponent, "Schatten exponent must be >= 1");
  double peak = 0.0;
  for (double l : dec.eigenvalues) peak = std::max(peak, std::abs(l));
  if (std::isinf(p) || peak == 0.0) return peak;
  double acc = 0.0;
  for (double l : dec.eigenvalues) acc += std::pow(std::abs(l) / peak, p);
  return peak * std::pow(acc, 1.0 / p);
}

}  // namespace specfun::linalg
