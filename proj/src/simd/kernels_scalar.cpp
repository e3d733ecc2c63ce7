#include "kernels_impl.hpp"

namespace specfun::simd::detail {
namespace {

double dot(const double* x, const double* y, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += x[i] * y[i];
  return acc;
}

void axpy(double a, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void rotate(double* x, double* y, double c, double s, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double xi = x[i];
    const double yi = y[i];
    x[i] = c * xi - s * yi;
    y[i] = s * xi + c * yi;
  }
}

void scale(double a, double* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) x[i] *= a;
}

void accumulate_squares(double a, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i] * x[i];
}

double weighted_dot(const double* w, const double* x, const double* y, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += w[i] * x[i] * y[i];
  return acc;
}

constexpr KernelTable kTable{Isa::scalar, dot, axpy, rotate, scale, accumulate_squares, weighted_dot};

}  // namespace

const KernelTable& scalar_table() noexcept { return kTable; }

}  // namespace specfun::simd::detail
