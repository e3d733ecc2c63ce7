#include <cmath>
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "specfun/monotone.hpp"
#include "specfun/random.hpp"

using namespace specfun;
using namespace specfun::monotone;
using fem::build_domain;
using fem::DirichletSpec;

namespace {

AssembledSpace space(std::size_t cells) { return AssembledSpace(build_domain(1, cells, DirichletSpec::both_ends)); }

Map scaled_duality(const AssembledSpace& s, double c) {
  return [s, c](const GridFunction& u) { return c * fem::apply_duality(s, u); };
}

// A(u) = J u + 0.1·ι(arctan ∘ u). The arctan term is monotone in the lumped
// inner product and has dual-norm Lipschitz constant 0.1·‖I‖² ≤ 0.1, so
// m = 1 and M = 1.1 hold exactly.
Map arctan_map(const AssembledSpace& s) {
  return [s](const GridFunction& u) {
    GridFunction a = u;
    for (auto& x : a.values) x = std::atan(x);
    return fem::apply_duality(s, u) + 0.1 * fem::embed_l2_functional(s, a);
  };
}

// Damped Picard on u = J⁻¹(q − 0.1·ι(arctan ∘ u)), a contraction with factor
// at most 0.1, iterated until the update stalls at rounding level.
GridFunction arctan_oracle(const AssembledSpace& s, const Functional& q) {
  const double omega = 0.8;
  GridFunction u = GridFunction::zeros(q.size());
  for (int it = 0; it < 100000; ++it) {
    GridFunction a = u;
    for (auto& x : a.values) x = std::atan(x);
    const auto target = fem::duality_solve(s, q - 0.1 * fem::embed_l2_functional(s, a));
    const GridFunction next = (1.0 - omega) * u + omega * target;
    const double change = s.h_norm(next - u);
    u = next;
    if (change <= 1e-15 * (1.0 + s.h_norm(u))) break;
  }
  return u;
}

Functional random_rhs(const AssembledSpace& s, Rng& rng, double scale) {
  return scale * fem::apply_duality(s, GridFunction{rng.normal_vector(s.n_free())});
}

}  // namespace

TEST_CASE("required radius") {
  const auto s = space(10);
  Rng rng(1);
  const auto q = random_rhs(s, rng, 1.0);
  MonotoneProblem p{s, arctan_map(s), 1.0, 1.1, 1.0, q};
  const double r = required_radius(p);
  p.q = 2.0 * q;
  CHECK(required_radius(p) == doctest::Approx(2.0 * r));
  p.q = p.apply(GridFunction::zeros(s.n_free()));
  CHECK(required_radius(p) == 0.0);

  // linear A = J with q = J y: (2/m)‖J y‖_* = (2/m)‖y‖_𝓗
  const GridFunction y{rng.normal_vector(s.n_free())};
  MonotoneProblem lin{s, scaled_duality(s, 1.0), 0.5, 1.0, 1.0, fem::apply_duality(s, y)};
  CHECK(required_radius(lin) == doctest::Approx(2.0 / 0.5 * s.h_norm(y)).epsilon(1e-10));
}

TEST_CASE("exact step for A = J with m = M = 1") {
  const auto s = space(12);
  Rng rng(2);
  const GridFunction y{rng.normal_vector(s.n_free())};
  const auto q = fem::apply_duality(s, y);
  MonotoneProblem p{s, scaled_duality(s, 1.0), 1.0, 1.0, 1.0, q};
  p.R = required_radius(p);
  const auto tr = solve(p);
  CHECK(tr.iterations == 1);
  CHECK(s.h_norm(tr.u - y) <= 1e-10);
  CHECK(tr.contraction_factor == 0.0);
}

TEST_CASE("start at the solution") {
  const auto s = space(8);
  MonotoneProblem p{s, arctan_map(s), 1.0, 1.1, 1.0, Functional::zeros(s.n_free())};
  const auto tr = solve(p);
  CHECK(tr.iterations == 0);
  CHECK(s.h_norm(tr.u) == 0.0);
}

TEST_CASE("arctan map matches the damped Picard oracle") {
  const auto s = space(11);  // 10 free nodes
  Rng rng(3);
  const MonotoneProblem base{s, arctan_map(s), 1.0, 1.1, 1.0, Functional::zeros(s.n_free())};
  for (int t = 0; t < 10; ++t) {
    MonotoneProblem p = base;
    p.q = random_rhs(s, rng, rng.uniform(0.5, 5.0));
    p.R = required_radius(p);
    const auto tr = solve(p);
    CHECK(tr.converged);
    CHECK(s.h_norm(tr.u - arctan_oracle(s, p.q)) <= 1e-8);
    CHECK(tr.max_ratio <= p.contraction_factor() + 0.02);
    CHECK(tr.max_h_norm <= p.R + 1e-9);
    CHECK(s.h_norm(tr.u) <= tr.initial_residual / p.m * (1 + 1e-6));
    CHECK(tr.residual_monotone);
    CHECK(tr.worst_monotonicity >= 1.0 - 1e-6);
  }
}

TEST_CASE("perturbation bound") {
  const auto s = space(10);
  Rng rng(4);
  {
    // linear A = cJ gives equality
    const double c = 2.0;
    const GridFunction y{rng.normal_vector(s.n_free())}, z{rng.normal_vector(s.n_free())};
    MonotoneProblem p{s, scaled_duality(s, c), c, c, 1.0, fem::apply_duality(s, y)};
    p.R = 10.0 * required_radius(p);
    const auto a = solve(p);
    MonotoneProblem pt = p;
    pt.q = fem::apply_duality(s, z);
    const auto b = solve(pt);
    const auto rec = perturbation_bound(p, p.q, pt.q, a.u, b.u);
    CHECK(rec.lhs == doctest::Approx((1.0 / c) * fem::dual_norm(s, p.q - pt.q)).epsilon(1e-9));
    CHECK(rec.lhs == doctest::Approx(rec.rhs).epsilon(1e-9));
  }
  {
    MonotoneProblem p{s, arctan_map(s), 1.0, 1.1, 1.0, random_rhs(s, rng, 1.0)};
    p.R = required_radius(p);
    const auto a = solve(p);
    const auto same = perturbation_bound(p, p.q, p.q, a.u, a.u);
    CHECK(same.holds(1e-10));
  }
  for (int t = 0; t < 50; ++t) {
    MonotoneProblem p{s, arctan_map(s), 1.0, 1.1, 1.0, random_rhs(s, rng, 2.0)};
    MonotoneProblem pt = p;
    pt.q = p.q + random_rhs(s, rng, 0.3);
    p.R = required_radius(p);
    pt.R = required_radius(pt);
    const auto a = solve(p), b = solve(pt);
    CHECK(perturbation_bound(p, p.q, pt.q, a.u, b.u).holds(1e-10));
  }
}

TEST_CASE("failure modes") {
  const auto s = space(10);
  Rng rng(5);
  const auto q = random_rhs(s, rng, 1.0);

  MonotoneProblem small{s, arctan_map(s), 1.0, 1.1, 1e-6, q};
  try {
    solve(small);
    FAIL("expected RadiusTooSmall");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::RadiusTooSmall);
  }

  // A = 1.5 J declared with M = 1: steps shrink by 0.5 against a bound of 0.02
  MonotoneProblem under{s, scaled_duality(s, 1.5), 1.0, 1.0, 1.0, q};
  under.R = required_radius(under);
  try {
    solve(under);
    FAIL("expected NonContraction");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NonContraction);
  }

  MonotoneProblem slow{s, arctan_map(s), 1.0, 1.1, 1.0, q};
  slow.R = required_radius(slow);
  SolveOptions opts;
  opts.max_iter = 2;
  try {
    solve(slow, opts);
    FAIL("expected MaxIterExceeded");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::MaxIterExceeded);
  }

  // declaring m larger than the true constant is caught by the spot check
  MonotoneProblem liar{s, scaled_duality(s, 0.5), 1.0, 1.0, 1.0, q};
  liar.R = required_radius(liar);
  try {
    solve(liar);
    FAIL("expected InvariantViolation");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InvariantViolation);
  }

  MonotoneProblem bad{s, arctan_map(s), 2.0, 1.0, 1.0, q};
  CHECK_THROWS_AS(solve(bad), Error);
}

TEST_CASE("trace export") {
  const auto s = space(10);
  Rng rng(6);
  MonotoneProblem p{s, arctan_map(s), 1.0, 1.1, 1.0, random_rhs(s, rng, 1.0)};
  p.R = required_radius(p);
  const auto tr = solve(p);
  const auto path = std::filesystem::temp_directory_path() / "specfun_trace_test.csv";
  write_trace_csv(path, tr);
  std::ifstream in(path);
  std::string header;
  std::getline(in, header);
  CHECK(header == "k,h_norm,residual,ratio");
  std::size_t rows = 0;
  for (std::string line; std::getline(in, line);) ++rows;
  CHECK(rows == tr.h_norms.size());
  std::filesystem::remove(path);
}
