#pragma once

// Fixed-step iteration Qu = u − (m/M²) J⁻¹(Au − q) for a strongly monotone,
// locally Lipschitz map A on W^{1,2}_D, started at u₁ = 0.

#include <filesystem>
#include <functional>
#include <vector>

#include "specfun/assembly.hpp"

namespace specfun::monotone {

using fem::AssembledSpace;
using fem::Functional;
using fem::GridFunction;

using Map = std::function<Functional(const GridFunction&)>;

struct MonotoneProblem {
  AssembledSpace space;
  Map apply;
  double m = 1.0;  // monotonicity constant
  double M = 1.0;  // Lipschitz constant on the ball
  double R = 1.0;  // ball radius
  Functional q;

  // Throws InvalidArgument unless 0 < m ≤ M and R > 0, ShapeMismatch on q.
  void validate() const;
  double contraction_factor() const;  // √(1 − m²/M²)
};

struct SolveOptions {
  double tol = 1e-10;          // on ‖Au − q‖_*
  int max_iter = 10000;
  double ratio_slack = 0.02;
  // Consecutive over-bound step ratios tolerated before NonContraction.
  int ratio_patience = 3;
  // Steps shorter than this (relative to max(1, ‖u‖)) are too close to
  // rounding to measure ratios or monotonicity on.
  double ratio_floor = 1e-9;
  double monotonicity_floor = 1e-5;
};

struct IterationTrace {
  std::vector<double> h_norms;    // ‖u_k‖_𝓗, k = 1, 2, ...
  std::vector<double> residuals;  // ‖Au_k − q‖_*
  std::vector<double> ratios;     // ‖u_{k+1} − u_k‖/‖u_k − u_{k−1}‖, NaN where not measured
  GridFunction u;
  int iterations = 0;
  bool converged = false;
  double contraction_factor = 0.0;
  double max_ratio = 0.0;         // over measured ratios
  double max_h_norm = 0.0;
  double initial_residual = 0.0;  // ‖A0 − q‖_*
  bool residual_monotone = true;  // residuals strictly decrease after the first step
  double worst_monotonicity = 1.0;  // min ⟨Au − Av, u − v⟩ / (m‖u − v‖²) over spot checks
  std::size_t monotonicity_checks = 0;
};

// (2/m)·‖A(0) − q‖_*
double required_radius(const MonotoneProblem& problem);

// Throws RadiusTooSmall, NonContraction, MaxIterExceeded, or
// InvariantViolation when an iterate leaves the ball, the solution bound
// fails, or a spot check contradicts the declared m.
IterationTrace solve(const MonotoneProblem& problem, const SolveOptions& opts = {});

struct PerturbationRecord {
  double lhs = 0.0;  // ‖u − ũ‖_𝓗
  double rhs = 0.0;  // (1/m)‖q − q̃‖_*
  double m = 1.0;
  // lhs ≤ rhs + 10·tol/m, the slack left by two solves to residual tol.
  bool holds(double tol) const;
};

PerturbationRecord perturbation_bound(const MonotoneProblem& problem, const Functional& q,
                                      const Functional& q_tilde, const GridFunction& u,
                                      const GridFunction& u_tilde);

void write_trace_csv(const std::filesystem::path& path, const IterationTrace& trace);

}  // namespace specfun::monotone
