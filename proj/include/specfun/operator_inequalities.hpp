#pragma once

// Finite-dimensional checks of the Hilbert–Schmidt Lipschitz estimate
// ‖f(A) − f(B)‖_HS ≤ L‖A − B‖_HS, the double-sum identity behind it, and the
// resolvent-difference variants for lower-bounded operators.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "specfun/linalg.hpp"

namespace specfun::inequalities {

using linalg::SymMatrix;

struct LipschitzFunction {
  std::function<double(double)> eval;
  double lipschitz_constant = 0.0;
  std::string descriptor;

  double operator()(double x) const { return eval(x); }
};

// Worst difference quotient |f(x) − f(y)|/|x − y| over `samples` points of
// [lo, hi] (all neighbour pairs plus random pairs). validate_lipschitz compares
// it against the declared constant.
double sampled_lipschitz(const LipschitzFunction& f, double lo, double hi, std::size_t samples = 2001,
                         std::uint64_t seed = 1);
// Throws BoundViolated if the declared constant fails the sampled check.
void validate_lipschitz(const LipschitzFunction& f, double lo, double hi);

LipschitzFunction linear(double slope);
LipschitzFunction absolute_value();
LipschitzFunction clamp_unit();  // clamp to [−1, 1]
LipschitzFunction soft_threshold(double tau);
// Continuous piecewise-linear interpolant through (knots[i], values[i]),
// constant outside; L = max |slope|.
LipschitzFunction piecewise_linear(std::vector<double> knots, std::vector<double> values);

struct ResolventTestFunction {
  std::function<double(double)> g;
  std::function<double(double)> g_prime;
  double rho = 0.0;     // spectra lie in [rho, ∞)
  double lambda = 1.0;  // lambda > −rho
  double l_res = 0.0;   // sup over [rho, ∞) of (x + lambda)²|g′(x)|
  std::string descriptor;
};

// Checks λ + ρ > 0 and the declared l_res on a geometric grid over [ρ, ρ+10⁶].
void validate_resolvent_function(const ResolventTestFunction& t);

// The closed-form l_res below are derived by calculus for each family.
ResolventTestFunction exp_decay(double rho, double lambda);       // e^{−x}
ResolventTestFunction resolvent_itself(double rho, double lambda);  // 1/(x+λ)
ResolventTestFunction x_exp_decay(double rho, double lambda);     // x·e^{−x}

struct GapRecord {
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;  // lhs / rhs, 0 when rhs = 0
};

// lhs = ‖f(A) − f(B)‖_HS via independent spectral calculus of A and B,
// rhs = L‖A − B‖_HS.
GapRecord bs_gap(const SymMatrix& a, const SymMatrix& b, const LipschitzFunction& f);

struct ParsevalRecord {
  double sum = 0.0;    // Σ_{α,β} (f(λ_α) − f(μ_β))² (u_α, v_β)²
  double hs_sq = 0.0;  // ‖f(A) − f(B)‖²_HS
  double residual() const;
};

ParsevalRecord parseval_double_sum(const SymMatrix& a, const SymMatrix& b, const LipschitzFunction& f);

// lhs = ‖g(A) − g(B)‖_HS, rhs = l_res·‖(A+λ)⁻¹ − (B+λ)⁻¹‖_HS.
// Throws LowerBoundViolated when some eigenvalue is below ρ − 1e−12.
GapRecord resolvent_gap(const SymMatrix& a, const SymMatrix& b, const ResolventTestFunction& t);

// g(x) = f(1/(x+λ)) with f Lipschitz on (0, 1/(ρ+λ)]; rhs = L‖resolvent difference‖_HS.
GapRecord resolvent_lipschitz_gap(const SymMatrix& a, const SymMatrix& b, double rho, double lambda,
                                  const LipschitzFunction& f);

enum class Family { absolute, clamp, soft_threshold, piecewise_linear, identity };

std::string family_name(Family f);

struct SuiteReport {
  std::string family;
  std::size_t cases = 0;
  double worst_ratio = 0.0;
  double min_ratio = 0.0;
  std::uint64_t worst_seed = 0;
  double tolerance = 1e-9;
  double worst_parseval_residual = 0.0;  // |sum − hs_sq| / (1 + hs_sq)

  bool passed() const { return worst_ratio <= 1.0 + tolerance; }
};

struct SuiteOptions {
  std::size_t n_max = 30;
  std::size_t cases = 1000;
  std::uint64_t seed = 7;
  double tolerance = 1e-9;
  // Pairs are independent draws instead of A and a perturbation of A.
  bool independent_pairs = false;
};

// Random symmetric pairs of dimension ≤ n_max; for each case draws A, B and a
// member of the family, validates L on [min eig − 1, max eig + 1], and keeps
// the worst ratio. Each case uses its own stream derived from (seed, index).
SuiteReport random_pair_suite(Family family, const SuiteOptions& opts);

// Resolvent counterpart: random pairs with spectrum in [ρ, ρ + 5].
enum class ResolventFamily { exp_decay, resolvent, x_exp_decay };
std::string resolvent_family_name(ResolventFamily f);
SuiteReport resolvent_pair_suite(ResolventFamily family, double rho, double lambda,
                                 const SuiteOptions& opts);

std::string to_json(const std::vector<SuiteReport>& reports);

}  // namespace specfun::inequalities
