#include <cmath>
#include <numbers>
#include <sstream>

#include "doctest.h"
#include "specfun/assembly.hpp"
#include "specfun/io.hpp"
#include "specfun/random.hpp"

using namespace specfun;
using namespace specfun::fem;
using std::numbers::pi;

namespace {

// First eigenvalue of the consistent-mass P1 pencil for the sine mode of
// angle θ per cell: (6/h²)(1 − cos θ)/(2 + cos θ).
double p1_eigenvalue(double theta, double h) {
  return 6.0 / (h * h) * (1.0 - std::cos(theta)) / (2.0 + std::cos(theta));
}

double quad(const SymMatrix& a, const std::vector<double>& u) {
  const auto au = linalg::multiply(a, u);
  double s = 0;
  for (std::size_t i = 0; i < u.size(); ++i) s += u[i] * au[i];
  return s;
}

}  // namespace

TEST_CASE("domain construction counts") {
  CHECK(build_domain(1, 4, DirichletSpec::both_ends).n_nodes() == 5);
  CHECK(build_domain(1, 4, DirichletSpec::both_ends).n_free() == 3);
  CHECK(build_domain(1, 4, DirichletSpec::none).n_free() == 5);
  CHECK(build_domain(1, 10, DirichletSpec::left_only).n_free() == 10);
  CHECK(build_domain(1, 10, DirichletSpec::right_only).n_free() == 10);
  const auto d = build_domain(1, 8, DirichletSpec::both_ends, 2.0);
  CHECK(d.h == doctest::Approx(0.25));
  CHECK(d.nodes.back() == doctest::Approx(2.0));
  CHECK_THROWS_AS(build_domain(1, 1, DirichletSpec::both_ends), Error);
  CHECK_THROWS_AS(build_domain(3, 8, DirichletSpec::both_ends), Error);
  CHECK(parse_dirichlet("left-only") == DirichletSpec::left_only);
  CHECK_THROWS_AS(parse_dirichlet("top"), Error);
}

TEST_CASE("stiffness assembly") {
  const auto d2 = build_domain(1, 2, DirichletSpec::both_ends);
  const auto k = assemble_stiffness(d2, CoefficientField::constant(d2, 1.0));
  REQUIRE(k.size() == 1);
  CHECK(k(0, 0) == doctest::Approx(4.0));

  const auto d = build_domain(1, 6, DirichletSpec::both_ends);
  const auto k1 = assemble_stiffness(d, CoefficientField::constant(d, 1.0));
  const auto k3 = assemble_stiffness(d, CoefficientField::constant(d, 3.0));
  CHECK(linalg::max_abs(k3.matrix() - (3.0 * k1).matrix()) <= 1e-12);
  CHECK(k1(2, 2) == doctest::Approx(2.0 * 6));
  CHECK(k1(2, 3) == doctest::Approx(-6.0));

  const auto dn = build_domain(1, 7, DirichletSpec::none);
  const auto kn = assemble_stiffness(dn, CoefficientField::constant(dn, 2.0));
  for (double v : linalg::multiply(kn, std::vector<double>(dn.n_free(), 1.0))) CHECK(std::abs(v) <= 1e-12);

  CHECK_THROWS_AS(assemble_stiffness(d, CoefficientField::from_values({1.0, 2.0})), Error);
  CHECK_THROWS_AS(validate(CoefficientField::from_values(std::vector<double>(6, 1.0), 2.0, 3.0), d), Error);
}

TEST_CASE("mass matrices") {
  for (auto spec : {DirichletSpec::both_ends, DirichletSpec::left_only, DirichletSpec::none}) {
    const auto d = build_domain(1, 9, spec);
    const auto mm = mass_matrix(d);
    double total = 0;
    for (double w : mm.lumped_all_nodes) total += w;
    CHECK(total == doctest::Approx(1.0).epsilon(1e-14));
  }
  const auto d = build_domain(1, 4, DirichletSpec::both_ends);
  for (double w : mass_matrix(d).lumped) CHECK(w == doctest::Approx(0.25));
  const auto dn = build_domain(1, 5, DirichletSpec::none);
  CHECK(quad(mass_matrix(dn).consistent, std::vector<double>(dn.n_free(), 1.0)) == doctest::Approx(1.0));
}

TEST_CASE("Poincare constant against the discrete closed form") {
  for (std::size_t n : {8u, 32u, 128u}) {
    const double h = 1.0 / n;
    AssembledSpace both(build_domain(1, n, DirichletSpec::both_ends));
    CHECK(both.poincare_constant() == doctest::Approx(1.0 / p1_eigenvalue(pi * h, h)).epsilon(1e-9));
    AssembledSpace left(build_domain(1, n, DirichletSpec::left_only));
    CHECK(left.poincare_constant() == doctest::Approx(1.0 / p1_eigenvalue(0.5 * pi * h, h)).epsilon(1e-9));
  }
  double prev_both = 1e9, prev_left = 1e9;
  for (std::size_t n : {4u, 8u, 16u, 32u, 64u, 128u, 256u}) {
    const double eb = std::abs(AssembledSpace(build_domain(1, n, DirichletSpec::both_ends)).poincare_constant() -
                               1.0 / (pi * pi));
    const double el = std::abs(AssembledSpace(build_domain(1, n, DirichletSpec::left_only)).poincare_constant() -
                               4.0 / (pi * pi));
    CHECK(eb < prev_both);
    CHECK(el < prev_left);
    prev_both = eb;
    prev_left = el;
  }
  CHECK(prev_both < 1e-5);
  CHECK(prev_left < 1e-5);
}

TEST_CASE("c_P is the reciprocal of the smallest pencil eigenvalue") {
  AssembledSpace s(build_domain(1, 30, DirichletSpec::right_only));
  const auto g = linalg::generalized_eig(s.unit_stiffness(), s.mass());
  CHECK(s.poincare_constant() * g.eigenvalues.front() == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("discrete Poincare inequality on random grid functions") {
  AssembledSpace s(build_domain(1, 40, DirichletSpec::both_ends));
  Rng rng(17);
  for (int t = 0; t < 200; ++t) {
    const auto u = rng.normal_vector(s.n_free());
    CHECK(quad(s.mass(), u) <= s.poincare_constant() * quad(s.unit_stiffness(), u) * (1 + 1e-9));
  }
}

TEST_CASE("no Dirichlet nodes means no Poincare constant") {
  AssembledSpace s(build_domain(1, 10, DirichletSpec::none));
  try {
    s.poincare_constant();
    FAIL("expected NoPoincare");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NoPoincare);
  }
}

TEST_CASE("duality map") {
  AssembledSpace s(build_domain(1, 25, DirichletSpec::left_only));
  Rng rng(19);
  const GridFunction y{rng.normal_vector(s.n_free())};
  const auto back = duality_solve(s, apply_duality(s, y));
  for (std::size_t i = 0; i < y.size(); ++i) CHECK(std::abs(back.values[i] - y.values[i]) <= 1e-9);
  for (double v : duality_solve(s, Functional::zeros(s.n_free())).values) CHECK(v == 0.0);
  CHECK(dual_norm(s, Functional::zeros(s.n_free())) == 0.0);
  CHECK(dual_norm(s, apply_duality(s, y)) == doctest::Approx(s.h_norm(y)).epsilon(1e-10));

  for (int t = 0; t < 10; ++t) {
    const Functional g{rng.normal_vector(s.n_free())};
    const auto x = duality_solve(s, g);
    // residual of (K₁ + M)x = g
    const auto jx = linalg::multiply(s.duality_matrix(), x.values);
    double r = 0, gn = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      r = std::max(r, std::abs(jx[i] - g.values[i]));
      gn = std::max(gn, std::abs(g.values[i]));
    }
    CHECK(r <= 1e-10 * (1 + gn));
    const double d = dual_norm(s, g);
    CHECK(d * d == doctest::Approx(pairing(g, x)).epsilon(1e-9));
    CHECK(pairing(g, x) == doctest::Approx(s.h_norm(x) * s.h_norm(x)).epsilon(1e-9));
  }
}

TEST_CASE("L2 embedding into the dual space") {
  AssembledSpace s(build_domain(1, 30, DirichletSpec::both_ends));
  Rng rng(23);
  for (double v : embed_l2_functional(s, GridFunction::zeros(s.n_free())).values) CHECK(v == 0.0);
  const GridFunction w{rng.normal_vector(s.n_free())};
  CHECK(pairing(embed_l2_functional(s, w), w) == doctest::Approx(s.l2_norm(w) * s.l2_norm(w)));

  // ‖I‖ from inverse iteration against the full pencil spectrum
  const auto l = SymMatrix::diagonal(s.lumped_weights());
  const auto g = linalg::generalized_eig(s.duality_matrix(), l);
  CHECK(s.embedding_norm() == doctest::Approx(1.0 / std::sqrt(g.eigenvalues.front())).epsilon(1e-9));
  CHECK(s.embedding_norm() <= 1.0);
  for (int t = 0; t < 50; ++t) {
    const GridFunction r{rng.normal_vector(s.n_free())};
    const double lhs = dual_norm(s, embed_l2_functional(s, r));
    CHECK(lhs <= s.embedding_norm() * s.l2_norm(r) * (1 + 1e-12));
    CHECK(lhs <= s.l2_norm(r));
  }
}

TEST_CASE("assembled matrices are symmetric") {
  AssembledSpace s(build_domain(1, 12, DirichletSpec::right_only));
  for (const SymMatrix* a : {&s.mass(), &s.unit_stiffness(), &s.duality_matrix()}) {
    for (std::size_t i = 0; i < a->size(); ++i)
      for (std::size_t j = 0; j < a->size(); ++j) CHECK((*a)(i, j) == (*a)(j, i));
  }
}

TEST_CASE("coordinate export lists the nonzeros") {
  AssembledSpace s(build_domain(1, 4, DirichletSpec::both_ends));
  std::ostringstream out;
  io::write_coordinate(out, s.unit_stiffness());
  std::istringstream in(out.str());
  std::size_t rows = 0, i, j;
  double v;
  while (in >> i >> j >> v) {
    CHECK(v == doctest::Approx(s.unit_stiffness()(i, j)));
    ++rows;
  }
  CHECK(rows == 7);  // tridiagonal 3×3
}
