#include <Eigen/Dense>
#include <cmath>
#include <numbers>

#include "doctest.h"
#include "specfun/linalg.hpp"
#include "specfun/random.hpp"

using namespace specfun;
using namespace specfun::linalg;

namespace {

SymMatrix from_rows(std::initializer_list<std::initializer_list<double>> rows) {
  const std::size_t n = rows.size();
  Matrix a(n, n);
  std::size_t i = 0;
  for (const auto& r : rows) {
    std::size_t j = 0;
    for (double v : r) a(i, j++) = v;
    ++i;
  }
  return SymMatrix(a);
}

SymMatrix random_sym(Rng& rng, std::size_t n, double scale = 1.0) {
  Matrix a(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a(i, j) = scale * rng.normal();
  return SymMatrix(a);
}

SymMatrix random_spd(Rng& rng, std::size_t n) {
  Matrix g(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) g(i, j) = rng.normal();
  Matrix a = multiply_at_b(g, g);
  for (std::size_t i = 0; i < n; ++i) a(i, i) += 0.5;
  return SymMatrix(a);
}

Eigen::MatrixXd to_eigen(const SymMatrix& a) {
  Eigen::MatrixXd e(a.size(), a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a.size(); ++j) e(i, j) = a(i, j);
  return e;
}

double orthonormality_defect(const Matrix& q) {
  const Matrix qtq = multiply_at_b(q, q);
  return max_abs(qtq - Matrix::identity(q.rows()));
}

}  // namespace

TEST_CASE("construction symmetrizes exactly") {
  Matrix a(2, 2);
  a(0, 1) = 1.0;
  a(1, 0) = 3.0;
  const SymMatrix s(a);
  CHECK(s(0, 1) == s(1, 0));
  CHECK(s(0, 1) == 2.0);
}

TEST_CASE("diagonal input is returned unchanged") {
  const double d[] = {2.0, 3.0};
  const auto dec = spectral_decompose(SymMatrix::diagonal(d));
  CHECK(dec.eigenvalues[0] == 2.0);
  CHECK(dec.eigenvalues[1] == 3.0);
  CHECK(max_abs(dec.eigenvectors - Matrix::identity(2)) == 0.0);
}

TEST_CASE("2x2 rotation pair matches the analytic eigenformula") {
  const auto dec = spectral_decompose(from_rows({{0, 1}, {1, 0}}));
  CHECK(dec.eigenvalues[0] == doctest::Approx(-1.0).epsilon(1e-15));
  CHECK(dec.eigenvalues[1] == doctest::Approx(1.0).epsilon(1e-15));
  const double r = 1.0 / std::sqrt(2.0);
  // columns are determined up to sign
  const double s0 = dec.eigenvectors(0, 0) > 0 ? 1.0 : -1.0;
  CHECK(s0 * dec.eigenvectors(0, 0) == doctest::Approx(r));
  CHECK(s0 * dec.eigenvectors(1, 0) == doctest::Approx(-r));
  const double s1 = dec.eigenvectors(0, 1) > 0 ? 1.0 : -1.0;
  CHECK(s1 * dec.eigenvectors(0, 1) == doctest::Approx(r));
  CHECK(s1 * dec.eigenvectors(1, 1) == doctest::Approx(r));
}

TEST_CASE("general 2x2 matches (a+d)/2 ± sqrt(((a-d)/2)^2 + b^2)") {
  Rng rng(3);
  for (int t = 0; t < 50; ++t) {
    const double a = rng.normal(), b = rng.normal(), d = rng.normal();
    const auto dec = spectral_decompose(from_rows({{a, b}, {b, d}}));
    const double mid = 0.5 * (a + d), rad = std::hypot(0.5 * (a - d), b);
    CHECK(std::abs(dec.eigenvalues[0] - (mid - rad)) <= 1e-14 * (1 + rad));
    CHECK(std::abs(dec.eigenvalues[1] - (mid + rad)) <= 1e-14 * (1 + rad));
  }
}

TEST_CASE("zero matrix") {
  const auto dec = spectral_decompose(SymMatrix::zeros(4));
  for (double l : dec.eigenvalues) CHECK(l == 0.0);
}

TEST_CASE("random matrices: orthonormality, reconstruction, order, Eigen agreement") {
  Rng rng(11);
  for (std::size_t n : {1u, 2u, 5u, 17u, 40u}) {
    CAPTURE(n);
    const auto a = random_sym(rng, n, 3.0);
    const auto dec = spectral_decompose(a);
    CHECK(orthonormality_defect(dec.eigenvectors) <= 1e-10);
    const auto rec = synthesize(dec, dec.eigenvalues);
    CHECK(max_abs(rec.matrix() - a.matrix()) <= 1e-9 * (1 + max_abs(a.matrix())));
    for (std::size_t k = 1; k < n; ++k) CHECK(dec.eigenvalues[k - 1] <= dec.eigenvalues[k]);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(to_eigen(a));
    for (std::size_t k = 0; k < n; ++k) {
      CHECK(std::abs(dec.eigenvalues[k] - es.eigenvalues()(k)) <= 1e-11 * (1 + std::abs(es.eigenvalues()(k))));
    }
  }
}

TEST_CASE("decomposition is deterministic") {
  Rng rng(5);
  const auto a = random_sym(rng, 12);
  const auto d1 = spectral_decompose(a);
  const auto d2 = spectral_decompose(a);
  CHECK(d1.eigenvalues == d2.eigenvalues);
  CHECK(max_abs(d1.eigenvectors - d2.eigenvectors) == 0.0);
}

TEST_CASE("warm-started decomposition agrees with the cold one") {
  Rng rng(6);
  const auto a = random_sym(rng, 20);
  const auto cold = spectral_decompose(a);
  Matrix pert(20, 20);
  for (std::size_t i = 0; i < 20; ++i) pert(i, i) = 1e-3 * rng.normal();
  const auto b = a + SymMatrix(pert);
  const auto warm = spectral_decompose(b, cold.eigenvectors);
  const auto ref = spectral_decompose(b);
  for (std::size_t k = 0; k < 20; ++k) CHECK(std::abs(warm.eigenvalues[k] - ref.eigenvalues[k]) <= 1e-12);
  CHECK(orthonormality_defect(warm.eigenvectors) <= 1e-10);
}

TEST_CASE("non-finite entries are rejected") {
  Matrix a(2, 2);
  a(0, 0) = std::nan("");
  try {
    spectral_decompose(SymMatrix(a));
    FAIL("expected NonFiniteEntry");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NonFiniteEntry);
  }
}

TEST_CASE("sweep budget exhaustion reports NoConvergence") {
  Rng rng(8);
  JacobiOptions opts;
  opts.max_sweeps = 1;
  try {
    spectral_decompose(random_sym(rng, 30), opts);
    FAIL("expected NoConvergence");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NoConvergence);
  }
}

TEST_CASE("matrix functions") {
  Rng rng(9);
  const auto a = random_sym(rng, 6);
  const auto dec = spectral_decompose(a);
  CHECK(max_abs(matrix_function(dec, [](double x) { return x; }).matrix() - a.matrix()) <= 1e-9);
  CHECK(max_abs(matrix_function(dec, [](double) { return 2.5; }).matrix() - (2.5 * Matrix::identity(6))) <= 1e-12);

  const auto e = matrix_function(spectral_decompose(from_rows({{0, 1}, {1, 0}})), [](double x) { return std::exp(x); });
  CHECK(e(0, 0) == doctest::Approx(std::cosh(1.0)).epsilon(1e-14));
  CHECK(e(1, 1) == doctest::Approx(std::cosh(1.0)).epsilon(1e-14));
  CHECK(e(0, 1) == doctest::Approx(std::sinh(1.0)).epsilon(1e-14));

  CHECK_THROWS_AS(matrix_function(dec, [](double) { return std::numeric_limits<double>::infinity(); }), Error);
}

TEST_CASE("composition law for monotone inner functions") {
  Rng rng(10);
  const auto a = random_sym(rng, 8);
  const auto dec = spectral_decompose(a);
  auto g = [](double x) { return std::atan(x) + 2.0 * x; };
  auto f = [](double x) { return std::sin(x); };
  const auto direct = matrix_function(dec, [&](double x) { return f(g(x)); });
  const auto nested = matrix_function(spectral_decompose(matrix_function(dec, g)), f);
  CHECK(max_abs(direct.matrix() - nested.matrix()) <= 1e-8);
}

TEST_CASE("Hilbert-Schmidt and Schatten norms") {
  CHECK(hs_norm(SymMatrix::zeros(3)) == 0.0);
  CHECK(hs_norm(SymMatrix::identity(3)) == doctest::Approx(std::sqrt(3.0)));
  CHECK(hs_norm(from_rows({{1, 2}, {2, 1}})) == doctest::Approx(std::sqrt(10.0)));

  CHECK(schatten_norm(spectral_decompose(SymMatrix::identity(4)), 1.0) == doctest::Approx(4.0));
  const double d34[] = {3.0, -4.0};
  CHECK(schatten_norm(spectral_decompose(SymMatrix::diagonal(d34)), kInfinity) == 4.0);
  const double d122[] = {1.0, 2.0, 2.0};
  CHECK(schatten_norm(spectral_decompose(SymMatrix::diagonal(d122)), 4.0) ==
        doctest::Approx(std::pow(33.0, 0.25)).epsilon(1e-14));
  CHECK_THROWS_AS(schatten_norm(spectral_decompose(SymMatrix::identity(2)), 0.5), Error);

  Rng rng(12);
  const auto a = random_sym(rng, 9);
  const auto dec = spectral_decompose(a);
  CHECK(std::abs(schatten_norm(dec, 2.0) - hs_norm(a)) <= 1e-10);
  const double op = schatten_norm(dec, kInfinity);
  for (double p : {1.0, 1.5, 2.0, 4.0, 10.0}) CHECK(schatten_norm(dec, p) >= op * (1 - 1e-14));

  // contraction: all |λ| ≤ 1 makes the norm nonincreasing in p
  const auto c = matrix_function(dec, [](double x) { return std::tanh(x); });
  const auto dc = spectral_decompose(c);
  double prev = schatten_norm(dc, 1.0);
  for (double p : {1.5, 2.0, 3.0, 6.0, 20.0}) {
    const double cur = schatten_norm(dc, p);
    CHECK(cur <= prev * (1 + 1e-14));
    prev = cur;
  }
}

TEST_CASE("SPD solves") {
  const std::vector<double> b{1.0, -2.0, 3.0};
  CHECK(solve_spd(SymMatrix::identity(3), b) == b);
  const double d24[] = {2.0, 4.0};
  const auto x = solve_spd(SymMatrix::diagonal(d24), std::vector<double>{2.0, 8.0});
  CHECK(x[0] == doctest::Approx(1.0));
  CHECK(x[1] == doctest::Approx(2.0));

  Rng rng(13);
  const auto a = random_spd(rng, 5);
  const auto rhs = rng.normal_vector(5);
  const auto sol = solve_spd(a, rhs);
  auto r = multiply(a, sol);
  for (std::size_t i = 0; i < 5; ++i) r[i] -= rhs[i];
  CHECK(norm2(r) <= 1e-10 * (1 + norm2(rhs)));

  try {
    solve_spd(from_rows({{1, 2}, {2, 1}}), std::vector<double>{1, 1});
    FAIL("expected NotPositiveDefinite");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotPositiveDefinite);
  }
}

TEST_CASE("generalized eigenproblem") {
  Rng rng(14);
  const auto k = random_sym(rng, 6);
  {
    const auto g = generalized_eig(k, SymMatrix::identity(6));
    const auto d = spectral_decompose(k);
    for (std::size_t i = 0; i < 6; ++i) CHECK(g.eigenvalues[i] == doctest::Approx(d.eigenvalues[i]));
  }
  const auto m = random_spd(rng, 6);
  {
    const auto g = generalized_eig(2.0 * m, m);
    for (double l : g.eigenvalues) CHECK(l == doctest::Approx(2.0).epsilon(1e-12));
  }
  {
    const double kd[] = {1.0, 3.0}, md[] = {1.0, 2.0};
    const auto g = generalized_eig(SymMatrix::diagonal(kd), SymMatrix::diagonal(md));
    CHECK(g.eigenvalues[0] == doctest::Approx(1.0));
    CHECK(g.eigenvalues[1] == doctest::Approx(1.5));
  }
  {
    const auto g = generalized_eig(k, m);
    // M-orthonormality and residuals
    const Matrix mpsi = multiply(m.matrix(), g.vectors);
    CHECK(max_abs(multiply_at_b(g.vectors, mpsi) - Matrix::identity(6)) <= 1e-9);
    const Matrix kpsi = multiply(k.matrix(), g.vectors);
    for (std::size_t j = 0; j < 6; ++j)
      for (std::size_t i = 0; i < 6; ++i)
        CHECK(std::abs(kpsi(i, j) - g.eigenvalues[j] * mpsi(i, j)) <=
              1e-8 * (1 + std::abs(g.eigenvalues[j])) * (1 + max_abs(mpsi)));
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(to_eigen(k), to_eigen(m));
    for (std::size_t i = 0; i < 6; ++i)
      CHECK(std::abs(g.eigenvalues[i] - es.eigenvalues()(i)) <= 1e-9 * (1 + std::abs(es.eigenvalues()(i))));
  }
}

TEST_CASE("consistent-mass P1 Dirichlet pencil matches its closed form") {
  // (K, M) = (tridiag(−1,2,−1)/h, h·tridiag(1,4,1)/6) has λ_k = (6/h²)(1 − cos kπh)/(2 + cos kπh).
  const std::size_t cells = 24, n = cells - 1;
  const double h = 1.0 / cells;
  Matrix kk(n, n), mm(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    kk(i, i) = 2.0 / h;
    mm(i, i) = 4.0 * h / 6.0;
    if (i + 1 < n) {
      kk(i, i + 1) = kk(i + 1, i) = -1.0 / h;
      mm(i, i + 1) = mm(i + 1, i) = h / 6.0;
    }
  }
  const auto g = generalized_eig(SymMatrix(kk), SymMatrix(mm));
  for (std::size_t k = 1; k <= n; ++k) {
    const double c = std::cos(k * std::numbers::pi * h);
    const double exact = 6.0 / (h * h) * (1.0 - c) / (2.0 + c);
    CHECK(std::abs(g.eigenvalues[k - 1] - exact) <= 1e-10 * exact);
  }
}
