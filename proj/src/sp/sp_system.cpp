#include "specfun/sp.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <optional>

#include "json.hpp"
#include "specfun/error.hpp"
#include "specfun/io.hpp"
#include "specfun/random.hpp"

namespace specfun::sp {

void SPProblem::validate() const {
  if (!(N > 0.0) || !std::isfinite(N)) throw Error(ErrorCode::InvalidArgument, "N must be positive");
  fem::validate(eps, space.domain());
  fem::validate(m_coeff, space.domain());
  if (V0.size() != space.n_free()) throw Error(ErrorCode::ShapeMismatch, "V0 size differs from free nodes");
  if (q.size() != space.n_free()) throw Error(ErrorCode::ShapeMismatch, "q size differs from free nodes");
  space.poincare_constant();
}

namespace {

// Evaluates A₀ along a sequence of nearby arguments, warm-starting each
// eigensolve from the previous one. The last evaluation is cached so that
// re-evaluating the accepted iterate reproduces the solver's residual exactly.
class A0Evaluator {
 public:
  explicit A0Evaluator(const SPProblem& p)
      : p_(p),
        k_eps_(fem::assemble_stiffness(p.space.domain(), p.eps)),
        h_(p.space, p.m_coeff, p.V0) {}

  struct Result {
    Functional value;
    density::DensityResult dens;
  };

  const Result& operator()(const GridFunction& v) {
    if (last_ && last_v_.values == v.values) return *last_;
    auto h = h_.with_potential(p_.V0 + v);
    auto dens = density::density_from(h, p_.dist, p_.N);
    Functional value{linalg::multiply(k_eps_, v.values)};
    value = value - fem::embed_l2_functional(p_.space, dens.rho);
    h_ = std::move(h);
    last_v_ = v;
    last_ = Result{std::move(value), std::move(dens)};
    return *last_;
  }

  density::DensityResult density_at(const GridFunction& v) { return (*this)(v).dens; }

 private:
  const SPProblem& p_;
  linalg::SymMatrix k_eps_;
  schrodinger::Hamiltonian h_;
  GridFunction last_v_;
  std::optional<Result> last_;
};

GridFunction random_smooth(const AssembledSpace& space, Rng& rng, double h_radius) {
  GridFunction g{rng.normal_vector(space.n_free())};
  GridFunction u = fem::duality_solve(space, fem::embed_l2_functional(space, g));
  return (h_radius / space.h_norm(u)) * u;
}

GridFunction random_rough(const AssembledSpace& space, Rng& rng, double h_radius) {
  GridFunction u{rng.normal_vector(space.n_free())};
  return (h_radius / space.h_norm(u)) * u;
}

}  // namespace

Functional apply_A0(const SPProblem& problem, const GridFunction& v) {
  problem.validate();
  A0Evaluator ev(problem);
  return ev(v).value;
}

Functional embedded_density(const SPProblem& problem, const GridFunction& v0) {
  const auto d = density::density_N(problem.space, problem.m_coeff, problem.dist, v0, problem.N);
  return fem::embed_l2_functional(problem.space, d.rho);
}

double density_lipschitz_estimate(const SPProblem& problem, double radius, std::size_t probes,
                                  std::uint64_t seed) {
  const auto& space = problem.space;
  A0Evaluator ev(problem);
  Rng rng(seed);
  double worst = 0.0;
  for (std::size_t i = 0; i < probes; ++i) {
    const double r = radius * rng.uniform(0.1, 1.0);
    const GridFunction u = (i % 2 == 0) ? random_smooth(space, rng, r) : random_rough(space, rng, r);
    GridFunction w;
    if (i % 3 == 2) {
      w = random_smooth(space, rng, radius * rng.uniform(0.1, 1.0));
    } else {
      const double delta = r * std::pow(10.0, rng.uniform(-3.0, -1.0));
      w = u + random_smooth(space, rng, delta);
    }
    const double dist = space.l2_norm(u - w);
    if (!(dist > 0.0)) continue;
    const auto nu = ev.density_at(u).rho;
    const auto nw = ev.density_at(w).rho;
    worst = std::max(worst, space.l2_norm(nu - nw) / dist);
  }
  return worst;
}

SPConstants estimate_constants(const SPProblem& problem, double radius, const ConstantOptions& opts) {
  problem.validate();
  SPConstants c;
  c.c_P = problem.space.poincare_constant();
  c.mu = problem.eps.lower_bound;
  c.m = c.mu / (1.0 + c.c_P);
  c.eps_max = problem.eps.max_value();
  c.embedding_norm = problem.space.embedding_norm();
  c.inflation = opts.inflation;
  c.R = radius;
  c.density_lipschitz =
      opts.frozen_density ? 0.0 : density_lipschitz_estimate(problem, radius > 0.0 ? radius : 1.0, opts.probes,
                                                              opts.seed);
  c.M = c.eps_max + c.embedding_norm * c.embedding_norm * c.inflation * c.density_lipschitz;
  c.M = std::max(c.M, c.m);
  return c;
}

SPSolution solve_sp(const SPProblem& problem, const SPOptions& opts) {
  problem.validate();
  const auto& space = problem.space;
  auto ev = std::make_shared<A0Evaluator>(problem);
  const GridFunction zero = GridFunction::zeros(space.n_free());
  const double rhs_norm = fem::dual_norm(space, (*ev)(zero).value - problem.q);

  SPSolution sol;
  const double c_P = space.poincare_constant();
  const double m = problem.eps.lower_bound / (1.0 + c_P);
  sol.required_radius = 2.0 / m * rhs_norm;
  sol.constants = estimate_constants(problem, sol.required_radius, opts.constants);
  sol.M_initial = sol.constants.M;

  monotone::MonotoneProblem mp{space, [ev](const GridFunction& v) { return (*ev)(v).value; },
                               sol.constants.m, sol.constants.M,
                               sol.required_radius > 0.0 ? sol.required_radius : 1.0, problem.q};
  auto solver_opts = opts.solver;
  solver_opts.tol = opts.tol;
  solver_opts.max_iter = opts.max_iter;
  for (;;) {
    try {
      sol.trace = monotone::solve(mp, solver_opts);
      break;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NonContraction || sol.doublings >= opts.max_doublings) throw;
    }
    mp.M *= 2.0;
    ++sol.doublings;
  }
  sol.constants.M = mp.M;
  sol.contraction_factor = mp.contraction_factor();
  sol.V = sol.trace.u;

  const auto& final_eval = (*ev)(sol.V);
  sol.density = final_eval.dens.rho;
  sol.fermi_level = final_eval.dens.fermi_level;
  sol.density_mass = space.l2_inner(sol.density, GridFunction{std::vector<double>(space.n_free(), 1.0)});
  sol.residual = fem::dual_norm(space, final_eval.value - problem.q);
  sol.h_norm = space.h_norm(sol.V);
  sol.norm_bound = (1.0 + c_P) / problem.eps.lower_bound * rhs_norm;

  if (sol.residual > opts.tol) {
    throw Error(ErrorCode::InvariantViolation, "weak-form residual " + std::to_string(sol.residual));
  }
  if (sol.h_norm > sol.norm_bound * (1.0 + 1e-6)) {
    throw Error(ErrorCode::InvariantViolation, "solution norm " + std::to_string(sol.h_norm) +
                                                   " exceeds bound " + std::to_string(sol.norm_bound));
  }
  return sol;
}

DataLipschitzRecord data_lipschitz_check(const SPProblem& problem, const Functional& q_tilde,
                                         const GridFunction& v1, const SPOptions& opts) {
  const auto& space = problem.space;
  SPProblem pq = problem;
  pq.q = q_tilde;
  SPProblem p1 = problem;
  p1.V0 = v1;
  const auto s0 = solve_sp(problem, opts);
  const auto sq = solve_sp(pq, opts);
  const auto s1 = solve_sp(p1, opts);

  DataLipschitzRecord rec;
  rec.tol = opts.tol;
  const double mu = problem.eps.lower_bound;
  const double c_P = s0.constants.c_P;
  const double m = s0.constants.m;
  rec.dq_lhs = space.h_norm(s0.V - sq.V);
  rec.dq_rhs = fem::dual_norm(space, problem.q - q_tilde);
  rec.dq_bound = (1.0 + c_P) / mu * rec.dq_rhs;
  rec.dq_ok = rec.dq_lhs <= rec.dq_bound + 10.0 * opts.tol * (1.0 + c_P) / mu;

  rec.dV0_lhs = space.h_norm(s0.V - s1.V);
  rec.dV0_norm = space.l2_norm(problem.V0 - v1);
  rec.observed_constant = rec.dV0_norm > 0.0 ? rec.dV0_lhs / rec.dV0_norm : 0.0;

  const double R = std::max(s0.required_radius, s1.required_radius);
  const double M = std::max(s0.constants.M, s1.constants.M);
  const auto& cst = opts.constants;
  rec.density_constant =
      cst.inflation * std::max(density_lipschitz_estimate(problem, R > 0.0 ? R : 1.0, cst.probes, cst.seed),
                               density_lipschitz_estimate(p1, R > 0.0 ? R : 1.0, cst.probes, cst.seed));
  const double x = m / M;
  // 1 − √(1 − x²) written without cancellation.
  const double gap = x * x / (1.0 + std::sqrt(1.0 - x * x));
  rec.bound_constant = (m / (M * M)) * space.embedding_norm() * rec.density_constant / gap;
  rec.dV0_ok = rec.dV0_lhs <= rec.bound_constant * rec.dV0_norm + 2.0 * opts.tol / m;
  return rec;
}

std::string to_json(const SPProblem& problem, const SPSolution& sol) {
  nlohmann::ordered_json j;
  j["n_free"] = problem.space.n_free();
  j["distribution"] = problem.dist.name;
  j["N"] = problem.N;
  j["fermi_level"] = sol.fermi_level;
  j["h_norm"] = sol.h_norm;
  j["norm_bound"] = sol.norm_bound;
  j["residual"] = sol.residual;
  j["density_mass"] = sol.density_mass;
  j["iterations"] = sol.trace.iterations;
  j["doublings"] = sol.doublings;
  j["required_radius"] = sol.required_radius;
  j["max_h_norm"] = sol.trace.max_h_norm;
  j["max_ratio"] = sol.trace.max_ratio;
  j["contraction_factor"] = sol.contraction_factor;
  auto& c = j["constants"];
  c["c_P"] = sol.constants.c_P;
  c["mu"] = sol.constants.mu;
  c["m"] = sol.constants.m;
  c["M"] = sol.constants.M;
  c["M_initial"] = sol.M_initial;
  c["eps_max"] = sol.constants.eps_max;
  c["embedding_norm"] = sol.constants.embedding_norm;
  c["density_lipschitz"] = sol.constants.density_lipschitz;
  c["inflation"] = sol.constants.inflation;
  return j.dump(2);
}

void write_solution_csv(const std::filesystem::path& path, const SPProblem& problem, const SPSolution& sol) {
  io::write_csv(path, {"x_i", "V_i", "rho_i"},
                {problem.space.domain().free_coordinates(), sol.V.values, sol.density.values});
}

}  // namespace specfun::sp
