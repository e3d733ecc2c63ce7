#include "kernels_impl.hpp"

#if defined(__aarch64__) && defined(__ARM_NEON)
#include <arm_neon.h>

namespace specfun::simd::detail {
namespace {

double dot(const double* x, const double* y, std::size_t n) {
  float64x2_t acc0 = vdupq_n_f64(0.0);
  float64x2_t acc1 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc0 = vfmaq_f64(acc0, vld1q_f64(x + i), vld1q_f64(y + i));
    acc1 = vfmaq_f64(acc1, vld1q_f64(x + i + 2), vld1q_f64(y + i + 2));
  }
  double acc = vaddvq_f64(vaddq_f64(acc0, acc1));
  for (; i < n; ++i) acc += x[i] * y[i];
  return acc;
}

void axpy(double a, const double* x, double* y, std::size_t n) {
  const float64x2_t va = vdupq_n_f64(a);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) vst1q_f64(y + i, vfmaq_f64(vld1q_f64(y + i), va, vld1q_f64(x + i)));
  for (; i < n; ++i) y[i] += a * x[i];
}

void rotate(double* x, double* y, double c, double s, std::size_t n) {
  const float64x2_t vc = vdupq_n_f64(c);
  const float64x2_t vs = vdupq_n_f64(s);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t xi = vld1q_f64(x + i);
    const float64x2_t yi = vld1q_f64(y + i);
    vst1q_f64(x + i, vfmsq_f64(vmulq_f64(vc, xi), vs, yi));
    vst1q_f64(y + i, vfmaq_f64(vmulq_f64(vc, yi), vs, xi));
  }
  for (; i < n; ++i) {
    const double xi = x[i];
    const double yi = y[i];
    x[i] = c * xi - s * yi;
    y[i] = s * xi + c * yi;
  }
}

void scale(double a, double* x, std::size_t n) {
  const float64x2_t va = vdupq_n_f64(a);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) vst1q_f64(x + i, vmulq_f64(va, vld1q_f64(x + i)));
  for (; i < n; ++i) x[i] *= a;
}

void accumulate_squares(double a, const double* x, double* y, std::size_t n) {
  const float64x2_t va = vdupq_n_f64(a);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t xi = vld1q_f64(x + i);
    vst1q_f64(y + i, vfmaq_f64(vld1q_f64(y + i), vmulq_f64(va, xi), xi));
  }
  for (; i < n; ++i) y[i] += a * x[i] * x[i];
}

double weighted_dot(const double* w, const double* x, const double* y, std::size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    acc = vfmaq_f64(acc, vmulq_f64(vld1q_f64(w + i), vld1q_f64(x + i)), vld1q_f64(y + i));
  }
  double total = vaddvq_f64(acc);
  for (; i < n; ++i) total += w[i] * x[i] * y[i];
  return total;
}

constexpr KernelTable kTable{Isa::neon, dot, axpy, rotate, scale, accumulate_squares, weighted_dot};

}  // namespace

const KernelTable* neon_table() noexcept { return &kTable; }

}  // namespace specfun::simd::detail

#else

namespace specfun::simd::detail {
const KernelTable* neon_table() noexcept { return nullptr; }
}  // namespace specfun::simd::detail

#endif
