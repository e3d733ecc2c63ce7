#include <cmath>

#include "doctest.h"
#include "json.hpp"
#include "specfun/random.hpp"
#include "specfun/sp.hpp"

using namespace specfun;
using namespace specfun::sp;
using fem::build_domain;
using fem::DirichletSpec;

namespace {

SPProblem problem(std::size_t cells, Rng& rng, double v0_norm = 3.0, double eps = 1.0,
                  DirichletSpec d = DirichletSpec::both_ends) {
  AssembledSpace s(build_domain(1, cells, d));
  GridFunction v0{rng.normal_vector(s.n_free())};
  v0 = (v0_norm / s.l2_norm(v0)) * v0;
  const Functional q = fem::embed_l2_functional(s, GridFunction{rng.normal_vector(s.n_free())});
  return SPProblem{s,
                   CoefficientField::constant(s.domain(), eps),
                   CoefficientField::constant(s.domain(), 1.0),
                   density::boltzmann(),
                   1.0,
                   v0,
                   q};
}

GridFunction random_h(const AssembledSpace& s, Rng& rng, double norm) {
  GridFunction u{rng.normal_vector(s.n_free())};
  u = fem::duality_solve(s, fem::embed_l2_functional(s, u));
  return (norm / s.h_norm(u)) * u;
}

}  // namespace

TEST_CASE("A0 at zero is minus the embedded density") {
  Rng rng(1);
  const auto p = problem(20, rng);
  const auto a0 = apply_A0(p, GridFunction::zeros(p.space.n_free()));
  const auto e = embedded_density(p, p.V0);
  for (std::size_t i = 0; i < a0.size(); ++i) CHECK(a0.values[i] == doctest::Approx(-e.values[i]).epsilon(1e-12));
}

TEST_CASE("A0 is strongly monotone with constant mu/(1 + c_P)") {
  Rng rng(2);
  const auto p = problem(30, rng, 4.0, 0.7);
  const double m = p.eps.lower_bound / (1.0 + p.space.poincare_constant());
  for (int t = 0; t < 20; ++t) {
    const auto u = random_h(p.space, rng, rng.uniform(0.1, 5.0));
    const auto v = random_h(p.space, rng, rng.uniform(0.1, 5.0));
    const double lhs = fem::pairing(apply_A0(p, u) - apply_A0(p, v), u - v);
    const double d = p.space.h_norm(u - v);
    CHECK(lhs >= m * d * d * (1 - 1e-6));
  }
}

TEST_CASE("scaling eps scales only the stiffness part") {
  Rng rng(3);
  const auto p = problem(16, rng);
  auto ps = p;
  ps.eps = CoefficientField::constant(p.space.domain(), 3.0);
  const auto v = random_h(p.space, rng, 1.0);
  const auto e = embedded_density(p, p.V0 + v);
  const auto a = apply_A0(p, v) + e;
  const auto as = apply_A0(ps, v) + e;
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(as.values[i] == doctest::Approx(3.0 * a.values[i]).epsilon(1e-9));
}

TEST_CASE("constant estimates") {
  Rng rng(4);
  const auto p = problem(24, rng);
  ConstantOptions frozen;
  frozen.frozen_density = true;
  const auto cf = estimate_constants(p, 2.0, frozen);
  CHECK(cf.c_P == p.space.poincare_constant());
  CHECK(cf.m == doctest::Approx(1.0 / (1.0 + cf.c_P)));
  CHECK(cf.M == doctest::Approx(1.0));  // ‖ε‖_∞

  ConstantOptions two, four;
  four.inflation = 4.0;
  const auto c2 = estimate_constants(p, 2.0, two);
  const auto c4 = estimate_constants(p, 2.0, four);
  CHECK(c2.density_lipschitz > 0.0);
  CHECK(c4.M - c4.eps_max == doctest::Approx(2.0 * (c2.M - c2.eps_max)));
  CHECK(c2.M >= c2.m);
}

TEST_CASE("constructed fixed point") {
  Rng rng(5);
  auto p = problem(30, rng, 5.0);
  p.q = -1.0 * embedded_density(p, p.V0);
  const auto sol = solve_sp(p);
  CHECK(sol.h_norm <= 1e-8);
  CHECK(sol.trace.iterations == 0);
}

TEST_CASE("solutions satisfy the residual, norm and mass invariants") {
  Rng rng(6);
  for (int t = 0; t < 4; ++t) {
    auto p = problem(25, rng, rng.uniform(0.0, 5.0), rng.uniform(0.5, 2.0));
    p.dist = t % 2 ? density::fermi_dirac() : density::boltzmann();
    p.N = rng.uniform(0.5, 3.0);
    const auto sol = solve_sp(p);
    CHECK(sol.residual <= 1e-10);
    const double rhs = fem::dual_norm(p.space, p.q + embedded_density(p, p.V0));
    CHECK(sol.h_norm <= (1 + sol.constants.c_P) / p.eps.lower_bound * rhs * (1 + 1e-6));
    CHECK(std::abs(sol.density_mass - p.N) <= 1e-8 * p.N);
    CHECK(sol.trace.max_h_norm <= sol.required_radius + 1e-9);
    CHECK(sol.trace.max_ratio <= sol.contraction_factor + 0.02);
    // independent residual from a fresh operator
    CHECK(fem::dual_norm(p.space, apply_A0(p, sol.V) - p.q) <= 1e-9);
  }
}

TEST_CASE("data Lipschitz checks") {
  Rng rng(7);
  const auto p = problem(20, rng, 2.0);
  const auto same = data_lipschitz_check(p, p.q, p.V0);
  CHECK(same.dq_lhs <= 1e-9);
  CHECK(same.dV0_lhs <= 1e-9);
  CHECK(same.passed());

  for (int t = 0; t < 3; ++t) {
    const Functional dq = fem::embed_l2_functional(p.space, GridFunction{rng.normal_vector(p.space.n_free())});
    GridFunction dv{rng.normal_vector(p.space.n_free())};
    dv = (0.5 / p.space.l2_norm(dv)) * dv;
    const auto rec = data_lipschitz_check(p, p.q + 0.3 * dq, p.V0 + dv);
    CHECK(rec.dq_ok);
    CHECK(rec.dV0_ok);
    CHECK(rec.observed_constant <= rec.bound_constant);
  }
}

TEST_CASE("frozen-density problem is linear with the q-Lipschitz ratio at most one") {
  // With 𝒩 frozen, Ψ(q) − Ψ(q̃) = K_ε⁻¹(q − q̃).
  Rng rng(8);
  const auto p = problem(30, rng, 1.0, 0.8);
  const auto k = fem::assemble_stiffness(p.space.domain(), p.eps);
  const double c_P = p.space.poincare_constant();
  for (int t = 0; t < 10; ++t) {
    const Functional dq{rng.normal_vector(p.space.n_free())};
    const GridFunction du{linalg::solve_spd(k, dq.values)};
    const double ratio = p.space.h_norm(du) / ((1 + c_P) / p.eps.lower_bound * fem::dual_norm(p.space, dq));
    CHECK(ratio <= 1.0 + 1e-12);
  }
}

TEST_CASE("problem validation") {
  Rng rng(9);
  auto p = problem(10, rng);
  p.N = 0.0;
  CHECK_THROWS_AS(solve_sp(p), Error);
  auto shape = problem(10, rng);
  shape.V0 = GridFunction::zeros(3);
  try {
    solve_sp(shape);
    FAIL("expected ShapeMismatch");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ShapeMismatch);
  }
  auto neumann = problem(10, rng, 1.0, 1.0, DirichletSpec::none);
  try {
    solve_sp(neumann);
    FAIL("expected NoPoincare");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NoPoincare);
  }
}

TEST_CASE("report contents") {
  Rng rng(10);
  const auto p = problem(12, rng);
  const auto sol = solve_sp(p);
  const auto j = nlohmann::json::parse(to_json(p, sol));
  CHECK(j["iterations"] == sol.trace.iterations);
  CHECK(j["constants"]["m"].get<double>() == sol.constants.m);
  CHECK(j["residual"].get<double>() <= 1e-10);
}
