#include <cmath>
#include <vector>

#include "doctest.h"
#include "specfun/error.hpp"
#include "specfun/random.hpp"
#include "specfun/simd.hpp"

using namespace specfun;
using simd::Isa;

namespace {

std::vector<Isa> vector_isas() {
  std::vector<Isa> out;
  for (Isa isa : {Isa::avx2, Isa::neon}) {
    if (simd::isa_supported(isa)) out.push_back(isa);
  }
  return out;
}

void require_close(const std::vector<double>& a, const std::vector<double>& b, double tol) {
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(std::abs(a[i] - b[i]) <= tol * (1.0 + std::abs(a[i])));
}

}  // namespace

TEST_CASE("scalar kernels match plain loops") {
  const auto& k = simd::kernels_for(Isa::scalar);
  const std::vector<double> x{1, 2, 3, 4, 5};
  const std::vector<double> y{-1, 0.5, 2, 0, 1};
  CHECK(k.dot(x.data(), y.data(), 5) == doctest::Approx(-1 + 1 + 6 + 0 + 5));
  const std::vector<double> w{2, 2, 2, 2, 2};
  CHECK(k.weighted_dot(w.data(), x.data(), y.data(), 5) == doctest::Approx(22));
  auto yy = y;
  k.axpy(2.0, x.data(), yy.data(), 5);
  CHECK(yy == std::vector<double>{1, 4.5, 8, 8, 11});
}

TEST_CASE("vector kernels agree with the scalar reference") {
  const auto isas = vector_isas();
  if (isas.empty()) {
    MESSAGE("no vector ISA on this machine; only the scalar table is exercised");
    return;
  }
  const auto& ref = simd::kernels_for(Isa::scalar);
  Rng rng(42);
  for (Isa isa : isas) {
    CAPTURE(simd::isa_name(isa));
    const auto& vk = simd::kernels_for(isa);
    for (std::size_t n : {0u, 1u, 2u, 3u, 4u, 5u, 7u, 8u, 9u, 15u, 16u, 17u, 31u, 64u, 101u, 257u}) {
      CAPTURE(n);
      const auto x = rng.normal_vector(n);
      const auto y = rng.normal_vector(n);
      auto w = rng.normal_vector(n);
      for (auto& v : w) v = std::abs(v);
      double mag = 1.0;
      for (std::size_t i = 0; i < n; ++i) mag += std::abs(x[i] * y[i]) * (1.0 + w[i]);

      CHECK(std::abs(ref.dot(x.data(), y.data(), n) - vk.dot(x.data(), y.data(), n)) <= 1e-13 * mag);
      CHECK(std::abs(ref.weighted_dot(w.data(), x.data(), y.data(), n) -
                     vk.weighted_dot(w.data(), x.data(), y.data(), n)) <= 1e-13 * mag);

      auto y1 = y, y2 = y;
      ref.axpy(0.7, x.data(), y1.data(), n);
      vk.axpy(0.7, x.data(), y2.data(), n);
      require_close(y1, y2, 1e-15);

      auto a1 = x, b1 = y, a2 = x, b2 = y;
      const double c = std::cos(0.3), s = std::sin(0.3);
      ref.rotate(a1.data(), b1.data(), c, s, n);
      vk.rotate(a2.data(), b2.data(), c, s, n);
      require_close(a1, a2, 1e-15);
      require_close(b1, b2, 1e-15);

      auto s1 = x, s2 = x;
      ref.scale(-1.5, s1.data(), n);
      vk.scale(-1.5, s2.data(), n);
      CHECK(s1 == s2);

      auto q1 = y, q2 = y;
      ref.accumulate_squares(0.25, x.data(), q1.data(), n);
      vk.accumulate_squares(0.25, x.data(), q2.data(), n);
      require_close(q1, q2, 1e-15);
    }
  }
}

TEST_CASE("active ISA can be switched and restored") {
  const Isa before = simd::active_isa();
  simd::set_active_isa(Isa::scalar);
  CHECK(simd::active_isa() == Isa::scalar);
  const std::vector<double> x{3, 4};
  CHECK(simd::dot(x, x) == 25.0);
  simd::set_active_isa(before);
  CHECK(simd::active_isa() == before);
}

TEST_CASE("unsupported ISA is rejected") {
  for (Isa isa : {Isa::avx2, Isa::neon}) {
    if (!simd::isa_supported(isa)) CHECK_THROWS_AS(simd::kernels_for(isa), Error);
  }
}
