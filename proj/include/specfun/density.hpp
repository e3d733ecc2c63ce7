#pragma once

// Occupation functions, traces tr f(H ∔ V − t), the Fermi level and nodal
// particle densities, plus probes for their monotonicity and Lipschitz
// behaviour.

#include <array>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "specfun/assembly.hpp"
#include "specfun/schrodinger.hpp"

namespace specfun::density {

using fem::AssembledSpace;
using fem::CoefficientField;
using fem::GridFunction;
using schrodinger::Hamiltonian;

struct DistributionFunction {
  std::string name;
  std::function<double(double)> f;
  std::function<double(double)> f_prime;
  std::function<double(double)> f_inverse;  // defined on (0, sup_value)
  std::function<double(double)> log_f;      // overflow-free log f
  double sup_value = 0.0;                   // sup f, possibly infinite

  double operator()(double r) const { return f(r); }
};

DistributionFunction boltzmann();    // e^{−r}
DistributionFunction fermi_dirac();  // 1/(1 + e^{r})
std::vector<DistributionFunction> builtin_distributions();
// Throws InvalidArgument for unknown names.
DistributionFunction distribution_by_name(const std::string& name);

struct DistributionCheck {
  bool decreasing = false;
  bool positive = false;
  double max_r4_f = 0.0;        // on [0, 10³]
  double max_r4_fprime = 0.0;   // on [0, 10³]
  double max_inverse_error = 0.0;
  bool ok() const;
};

DistributionCheck check_distribution(const DistributionFunction& dist);
// Throws InvariantViolation when check_distribution fails.
void validate(const DistributionFunction& dist);

// sup over r ≥ −lambda_ref of (r + lambda_ref)^k f(r).
double weighted_sup(const DistributionFunction& dist, double lambda_ref, int k);
// c_k for k = 0..4.
std::array<double, 5> c_bounds(const DistributionFunction& dist, double lambda_ref);

// Σ_n f(λ_n − t)
double trace_f(const std::vector<double>& eigenvalues, const DistributionFunction& dist, double t);
double trace_f(const Hamiltonian& h, const DistributionFunction& dist, double t);

struct FermiResult {
  double level = 0.0;
  double trace = 0.0;
  double N = 0.0;
  double tol = 0.0;
  int iterations = 0;  // bisection steps
  int expansions = 0;  // bracket doublings
};

// Unique t with trace_f(t) = N. tol ≤ 0 selects 1e−10·N. Bisects until the
// trace is within tol and the bracket has shrunk to rounding level.
FermiResult fermi_level(const std::vector<double>& eigenvalues, const DistributionFunction& dist, double N,
                        double tol = 0.0);
FermiResult fermi_level(const Hamiltonian& h, const DistributionFunction& dist, double N, double tol = 0.0);

// ρ_i = Σ_n f(λ_n − t) ψ_n(i)², the density of f(H ∔ V − t).
GridFunction density_M(const Hamiltonian& h, const DistributionFunction& dist, double t);

struct DensityResult {
  GridFunction rho;
  double fermi_level = 0.0;
  double trace = 0.0;
  std::vector<double> occupations;  // f(λ_n − 𝓔)
  int fermi_iterations = 0;
};

DensityResult density_from(const Hamiltonian& h, const DistributionFunction& dist, double N, double tol = 0.0);
DensityResult density_N(const AssembledSpace& space, const CoefficientField& m_coeff,
                        const DistributionFunction& dist, const GridFunction& v, double N, double tol = 0.0);

// (𝒩(U) − 𝒩(V), U − V) in the lumped inner product.
double monotonicity_probe(const AssembledSpace& space, const CoefficientField& m_coeff,
                          const DistributionFunction& dist, const GridFunction& u, const GridFunction& v,
                          double N);
// (𝓜(U) − 𝓜(V), U − V) with 𝓜(V) the density of f(H ∔ V).
double monotonicity_probe_M(const AssembledSpace& space, const CoefficientField& m_coeff,
                            const DistributionFunction& dist, const GridFunction& u, const GridFunction& v);

struct LipschitzReport {
  std::size_t cases = 0;
  double worst_ratio_M = 0.0;      // ‖Δ𝓜‖/‖ΔV‖
  double worst_ratio_N = 0.0;      // ‖Δ𝒩‖/‖ΔV‖
  double worst_ratio_fermi = 0.0;  // |Δ𝓔|/‖ΔV‖
  double max_abs_fermi = 0.0;      // max |𝓔(V)|
  double worst_halving_growth = 0.0;  // max ratio(h/2)/ratio(h)
  bool halving_stable = true;      // ratio(h/2) ≤ 2·ratio(h) everywhere
  bool fermi_bracket_ok = true;    // T̃ ≤ 𝓔(V) ≤ T everywhere
  double gamma = 0.0;
  double bracket_lo = 0.0;         // smallest T̃ seen
  double bracket_hi = 0.0;         // largest T seen
  bool all_finite = true;

  bool passed() const { return all_finite && halving_stable && fermi_bracket_ok; }
};

// Random pairs in the lumped L₂ ball of radius R.
LipschitzReport lipschitz_probe(const AssembledSpace& space, const CoefficientField& m_coeff,
                                const DistributionFunction& dist, double R, double N, std::size_t cases,
                                std::uint64_t seed);

// Fermi levels of the comparison spectra ¼λ⁽⁰⁾ − λ and 7/4·λ⁽⁰⁾ + λ, which
// bracket 𝓔(V) for every ‖V‖ ≤ R when λ = 1 + γR⁴.
std::pair<double, double> fermi_bracket(const Hamiltonian& h0, const DistributionFunction& dist, double N,
                                        double lambda);

struct NuclearityRecord {
  int k = 0;
  double lhs = 0.0;  // Σ (λ_n + λ)^k f(λ_n)
  double rhs = 0.0;  // Σ (λ_n + λ)⁻² · sup (r + λ)^{k+2} f(r)
};

// k = 0, 1, 2. Requires λ_min + lambda > 0.
std::vector<NuclearityRecord> nuclearity_check(const Hamiltonian& h, const DistributionFunction& dist,
                                               double lambda);

void write_density_csv(const std::filesystem::path& path, const AssembledSpace& space, const GridFunction& rho);
std::string to_json(const FermiResult& r);

}  // namespace specfun::density
