#pragma once

// Data-parallel inner loops used by the dense linear algebra. Each kernel has
// a scalar reference implementation and, where the CPU allows it, an AVX2+FMA
// (x86-64) or NEON (aarch64) variant. The variant is chosen once at startup
// from CPUID and can be overridden with SPECFUN_SP_ISA=scalar|avx2|neon.

#include <cstddef>
#include <span>
#include <string_view>

namespace specfun::simd {

enum class Isa { scalar, avx2, neon };

struct KernelTable {
  Isa isa;
  // sum x[i]*y[i]
  double (*dot)(const double* x, const double* y, std::size_t n);
  // y += a*x
  void (*axpy)(double a, const double* x, double* y, std::size_t n);
  // (x, y) <- (c*x - s*y, s*x + c*y)
  void (*rotate)(double* x, double* y, double c, double s, std::size_t n);
  // x *= a
  void (*scale)(double a, double* x, std::size_t n);
  // y += a*x*x
  void (*accumulate_squares)(double a, const double* x, double* y, std::size_t n);
  // sum w[i]*x[i]*y[i]
  double (*weighted_dot)(const double* w, const double* x, const double* y, std::size_t n);
};

bool isa_supported(Isa isa) noexcept;
std::string_view isa_name(Isa isa) noexcept;

// Throws specfun::Error(InvalidArgument) if the ISA is not available here.
const KernelTable& kernels_for(Isa isa);

const KernelTable& active_kernels() noexcept;
Isa active_isa() noexcept;
void set_active_isa(Isa isa);

inline double dot(std::span<const double> x, std::span<const double> y) {
  return active_kernels().dot(x.data(), y.data(), x.size());
}
inline void axpy(double a, std::span<const double> x, std::span<double> y) {
  active_kernels().axpy(a, x.data(), y.data(), x.size());
}
inline void rotate(std::span<double> x, std::span<double> y, double c, double s) {
  active_kernels().rotate(x.data(), y.data(), c, s, x.size());
}
inline void scale(double a, std::span<double> x) { active_kernels().scale(a, x.data(), x.size()); }
inline void accumulate_squares(double a, std::span<const double> x, std::span<double> y) {
  active_kernels().accumulate_squares(a, x.data(), y.data(), x.size());
}
inline double weighted_dot(std::span<const double> w, std::span<const double> x,
                           std::span<const double> y) {
  return active_kernels().weighted_dot(w.data(), x.data(), y.data(), x.size());
}

}  // namespace specfun::simd
