#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "specfun/error.hpp"
#include "specfun/io.hpp"
#include "specfun/monotone.hpp"

namespace specfun::monotone {

void MonotoneProblem::validate() const {
  if (!(m > 0.0) || !(M >= m) || !std::isfinite(M)) {
    throw Error(ErrorCode::InvalidArgument, "constants must satisfy 0 < m <= M");
  }
  if (!(R > 0.0)) throw Error(ErrorCode::InvalidArgument, "ball radius must be positive");
  if (q.size() != space.n_free()) throw Error(ErrorCode::ShapeMismatch, "right-hand side size");
  if (!apply) throw Error(ErrorCode::InvalidArgument, "map is empty");
}

double MonotoneProblem::contraction_factor() const {
  const double r = m / M;
  return std::sqrt(std::max(0.0, 1.0 - r * r));
}

double required_radius(const MonotoneProblem& problem) {
  const auto a0 = problem.apply(GridFunction::zeros(problem.space.n_free()));
  return 2.0 / problem.m * fem::dual_norm(problem.space, a0 - problem.q);
}

IterationTrace solve(const MonotoneProblem& problem, const SolveOptions& opts) {
  problem.validate();
  const auto& space = problem.space;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  IterationTrace tr;
  tr.contraction_factor = problem.contraction_factor();
  const double bound = tr.contraction_factor + opts.ratio_slack;
  const double step = problem.m / (problem.M * problem.M);

  GridFunction u = GridFunction::zeros(space.n_free());
  fem::Functional r = problem.apply(u) - problem.q;
  double res = fem::dual_norm(space, r);
  tr.initial_residual = res;
  tr.h_norms.push_back(0.0);
  tr.residuals.push_back(res);
  tr.ratios.push_back(nan);

  const double needed = 2.0 / problem.m * res;
  if (problem.R < needed * (1.0 - 1e-12)) {
    throw Error(ErrorCode::RadiusTooSmall,
                "R = " + std::to_string(problem.R) + " below required " + std::to_string(needed));
  }

  double prev_step = 0.0;
  int excess = 0;
  while (res > opts.tol) {
    if (tr.iterations >= opts.max_iter) {
      throw Error(ErrorCode::MaxIterExceeded, "residual " + std::to_string(res) + " after " +
                                                  std::to_string(tr.iterations) + " iterations");
    }
    ++tr.iterations;
    const GridFunction du = (-step) * fem::duality_solve(space, r);
    GridFunction next = u + du;
    const double step_norm = space.h_norm(du);
    const double norm = space.h_norm(next);
    if (norm > problem.R + 1e-9) {
      throw Error(ErrorCode::InvariantViolation, "iterate left the ball: " + std::to_string(norm));
    }
    const double scale = std::max(1.0, norm);

    double ratio = nan;
    if (prev_step > opts.ratio_floor * scale) {
      ratio = step_norm / prev_step;
      tr.max_ratio = std::max(tr.max_ratio, ratio);
      excess = ratio > bound ? excess + 1 : 0;
      if (excess >= opts.ratio_patience) {
        throw Error(ErrorCode::NonContraction, "step ratio " + std::to_string(ratio) + " exceeds " +
                                                   std::to_string(bound) + " repeatedly");
      }
    }

    fem::Functional r_next = problem.apply(next) - problem.q;
    if (step_norm > opts.monotonicity_floor * scale) {
      // ⟨A(next) − A(u), next − u⟩ = ⟨r_next − r, du⟩
      const double mono = fem::pairing(r_next - r, du) / (problem.m * step_norm * step_norm);
      tr.worst_monotonicity = std::min(tr.worst_monotonicity, mono);
      ++tr.monotonicity_checks;
      if (mono < 1.0 - 1e-6) {
        throw Error(ErrorCode::InvariantViolation,
                    "declared monotonicity constant contradicted, ratio " + std::to_string(mono));
      }
    }

    const double res_next = fem::dual_norm(space, r_next);
    if (tr.iterations > 1 && !(res_next < res)) tr.residual_monotone = false;
    u = std::move(next);
    r = std::move(r_next);
    res = res_next;
    prev_step = step_norm;
    tr.h_norms.push_back(norm);
    tr.residuals.push_back(res);
    tr.ratios.push_back(ratio);
    tr.max_h_norm = std::max(tr.max_h_norm, norm);
  }
  tr.converged = true;

  const double unorm = space.h_norm(u);
  const double limit = (tr.initial_residual + opts.tol) / problem.m * (1.0 + 1e-6);
  if (unorm > limit) {
    throw Error(ErrorCode::InvariantViolation,
                "solution norm " + std::to_string(unorm) + " exceeds bound " + std::to_string(limit));
  }
  tr.u = std::move(u);
  return tr;
}

bool PerturbationRecord::holds(double tol) const { return lhs <= rhs + 10.0 * tol / m; }

PerturbationRecord perturbation_bound(const MonotoneProblem& problem, const Functional& q,
                                      const Functional& q_tilde, const GridFunction& u,
                                      const GridFunction& u_tilde) {
  PerturbationRecord rec;
  rec.m = problem.m;
  rec.lhs = problem.space.h_norm(u - u_tilde);
  rec.rhs = fem::dual_norm(problem.space, q - q_tilde) / problem.m;
  return rec;
}

void write_trace_csv(const std::filesystem::path& path, const IterationTrace& trace) {
  std::vector<double> k(trace.h_norms.size());
  for (std::size_t i = 0; i < k.size(); ++i) k[i] = static_cast<double>(i + 1);
  io::write_csv(path, {"k", "h_norm", "residual", "ratio"}, {k, trace.h_norms, trace.residuals, trace.ratios});
}

}  // namespace specfun::monotone
