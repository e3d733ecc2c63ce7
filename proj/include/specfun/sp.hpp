#pragma once

// The Schrödinger–Poisson map
//     ⟨A₀V, W⟩ = ∫ ε∇V·∇W − (𝒩(V₀ + V), W)
// and its solution Ψ(V₀, q) of A₀V = q by the monotone iteration.

#include <cstdint>
#include <filesystem>
#include <string>

#include "specfun/assembly.hpp"
#include "specfun/density.hpp"
#include "specfun/monotone.hpp"

namespace specfun::sp {

using fem::AssembledSpace;
using fem::CoefficientField;
using fem::Functional;
using fem::GridFunction;

struct SPProblem {
  AssembledSpace space;
  CoefficientField eps;
  CoefficientField m_coeff;
  density::DistributionFunction dist;
  double N = 1.0;
  GridFunction V0;
  Functional q;

  // Throws InvalidArgument, ShapeMismatch or NoPoincare.
  void validate() const;
};

// K_ε V − ι(𝒩(V₀ + V)), building a fresh operator each call.
Functional apply_A0(const SPProblem& problem, const GridFunction& v);

// ι(𝒩(V₀)), so that A₀(0) = −ι(𝒩(V₀)).
Functional embedded_density(const SPProblem& problem, const GridFunction& v0);

struct SPConstants {
  double c_P = 0.0;
  double mu = 0.0;
  double m = 0.0;               // μ/(1 + c_P)
  double eps_max = 0.0;
  double embedding_norm = 0.0;  // ‖I‖ for L₂ → 𝓗*
  double density_lipschitz = 0.0;  // probe-measured, before inflation
  double inflation = 2.0;
  double M = 0.0;               // eps_max + ‖I‖²·inflation·density_lipschitz, at least m
  double R = 0.0;               // ball radius the constants refer to
};

struct ConstantOptions {
  std::size_t probes = 12;
  std::uint64_t seed = 11;
  double inflation = 2.0;
  // Skip the density probes and use a frozen (constant) density.
  bool frozen_density = false;
};

// Largest observed ‖𝒩(V₀ + U) − 𝒩(V₀ + W)‖/‖U − W‖ for U, W in the 𝓗-ball
// of radius `radius`, mixing wide and close pairs.
double density_lipschitz_estimate(const SPProblem& problem, double radius, std::size_t probes,
                                  std::uint64_t seed);

SPConstants estimate_constants(const SPProblem& problem, double radius, const ConstantOptions& opts = {});

struct SPOptions {
  double tol = 1e-10;
  int max_iter = 20000;
  int max_doublings = 20;
  ConstantOptions constants;
  monotone::SolveOptions solver;
};

struct SPSolution {
  GridFunction V;
  double fermi_level = 0.0;
  GridFunction density;  // 𝒩(V₀ + V)
  SPConstants constants;
  double M_initial = 0.0;
  int doublings = 0;
  double contraction_factor = 0.0;
  double required_radius = 0.0;
  monotone::IterationTrace trace;
  double residual = 0.0;     // ‖K_ε V − ι𝒩(V₀ + V) − q‖_*
  double h_norm = 0.0;       // ‖V‖_𝓗
  double norm_bound = 0.0;   // (1 + c_P)/μ · ‖q + ι𝒩(V₀)‖_*
  double density_mass = 0.0; // Σ m_i ρ_i
};

// Throws InvariantViolation if the residual or the norm bound fails on the
// accepted solution.
SPSolution solve_sp(const SPProblem& problem, const SPOptions& opts = {});

struct DataLipschitzRecord {
  double tol = 0.0;
  double dq_lhs = 0.0;    // ‖Ψ(V₀,q) − Ψ(V₀,q̃)‖_𝓗
  double dq_rhs = 0.0;    // ‖q − q̃‖_*
  double dq_bound = 0.0;  // (1 + c_P)/μ · dq_rhs
  bool dq_ok = false;
  double dV0_lhs = 0.0;   // ‖Ψ(V₀,q) − Ψ(V₁,q)‖_𝓗
  double dV0_norm = 0.0;  // ‖V₀ − V₁‖_{L₂}
  double observed_constant = 0.0;  // dV0_lhs / dV0_norm
  double bound_constant = 0.0;   // (1 − √(1 − m²/M²))⁻¹ (m/M²) ‖I‖ c
  double density_constant = 0.0;   // c used above
  bool dV0_ok = false;

  bool passed() const { return dq_ok && dV0_ok; }
};

DataLipschitzRecord data_lipschitz_check(const SPProblem& problem, const Functional& q_tilde,
                                         const GridFunction& v1, const SPOptions& opts = {});

std::string to_json(const SPProblem& problem, const SPSolution& sol);
// Columns x_i, V_i, rho_i.
void write_solution_csv(const std::filesystem::path& path, const SPProblem& problem, const SPSolution& sol);

}  // namespace specfun::sp
