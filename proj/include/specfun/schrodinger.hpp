#pragma once

// Discrete Schrödinger operators H ∔ V on an assembled P1 space.
//
// The L₂ geometry is the lumped one, (u, v) = Σ m_i u_i v_i. With L = diag(m)
// the operator is represented in orthonormal coordinates as
//     S = L^{-1/2} K_m L^{-1/2} + diag(V),
// where K_m is the stiffness for the coefficient 𝔪⁻¹. Eigenfunctions are
// ψ = L^{-1/2}φ for the orthonormal eigenvectors φ of S, so ΨᵀLΨ = I, and the
// multiplication operator M_W becomes diag(W) in these coordinates.

#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "specfun/assembly.hpp"
#include "specfun/linalg.hpp"

namespace specfun::schrodinger {

using fem::AssembledSpace;
using fem::CoefficientField;
using fem::GridFunction;
using linalg::SymMatrix;

class Hamiltonian {
 public:
  Hamiltonian(const AssembledSpace& space, const CoefficientField& m_coeff, GridFunction v);

  // Same space and 𝔪 with a new potential. The eigensolver starts from this
  // operator's eigenbasis, which pays off when the potentials are close.
  Hamiltonian with_potential(GridFunction v) const;

  const AssembledSpace& space() const noexcept;
  const CoefficientField& m_coeff() const noexcept;
  const GridFunction& potential() const noexcept { return v_; }
  std::size_t size() const noexcept { return v_.size(); }

  const SymMatrix& stiffness() const noexcept;  // K_m on free nodes
  const SymMatrix& symmetric_operator() const noexcept { return s_; }
  const linalg::Vector& eigenvalues() const noexcept { return dec_.eigenvalues; }
  // Orthonormal eigenvectors φ of the symmetric representation.
  const linalg::Matrix& symmetric_eigenvectors() const noexcept { return dec_.eigenvectors; }
  const linalg::SpectralDecomposition& decomposition() const noexcept { return dec_; }
  // Nodal eigenfunctions ψ_n, lumped-orthonormal.
  linalg::Matrix eigenfunctions() const;
  // m_i^{-1/2}
  const std::vector<double>& inv_sqrt_weights() const noexcept;

  double lambda_min() const { return dec_.eigenvalues.front(); }

  double form(const GridFunction& u) const;            // 𝔱[u] = uᵀK_m u
  double potential_form(const GridFunction& u) const;  // ∫ V u²
  double form_v(const GridFunction& u) const { return form(u) + potential_form(u); }

 private:
  struct Shared;
  Hamiltonian(std::shared_ptr<const Shared> shared, GridFunction v, const linalg::Matrix* warm);

  std::shared_ptr<const Shared> shared_;
  GridFunction v_;
  SymMatrix s_;
  linalg::SpectralDecomposition dec_;
};

Hamiltonian build_hamiltonian(const AssembledSpace& space, const CoefficientField& m_coeff, GridFunction v);

struct GammaEstimate {
  double c1_probe = 0.0;  // best observed ‖ψ‖_{L₆}/‖ψ‖_{W^{1,2}}
  double safety = 2.0;
  double c1 = 0.0;        // c1_probe · safety
  double m_sup = 1.0;     // ‖𝔪‖_∞
  double gamma = 0.0;     // c1⁶ (‖𝔪‖_∞ + 1)³ / 4
};

double gamma_from_c1(double c1, double m_sup);

// Embedding constant of W^{1,2}_D into L₆ estimated by maximizing the ratio
// over hat functions, low modes, random vectors and a nonlinear ascent.
GammaEstimate estimate_gamma(const AssembledSpace& space, const CoefficientField& m_coeff,
                             std::uint64_t seed = 1, double safety = 2.0);

struct BoundCheck {
  std::string name;
  double worst_margin = 0.0;  // min over probes of (rhs − lhs)/(1 + |lhs| + |rhs|)
  std::size_t probes = 0;
};

struct FormBoundCertificate {
  double gamma = 0.0;
  double R = 0.0;
  double lambda = 1.0;  // 1 + γR⁴
  std::vector<BoundCheck> checks;

  static FormBoundCertificate make(double gamma, double R);
};

// Checks, for ‖V‖ ≤ R, on all eigenvectors of H_V and H_0 plus random probes:
//   |∫V|ψ|²| ≤ ¾(𝔱+1)[ψ] + γ‖V‖⁴‖ψ‖²,
//   ¼𝔱[ψ] − λ‖ψ‖² ≤ 𝔱_V[ψ] ≤ 7/4·𝔱[ψ] + λ‖ψ‖²,
//   ¼(𝔱+1)[ψ] ≤ (𝔱_V + λ)[ψ],
//   ¼λ_n⁽⁰⁾ − λ ≤ λ_n⁽ⱽ⁾ ≤ 7/4·λ_n⁽⁰⁾ + λ, and 1/(λ_min + λ) ≤ 4.
// Throws BoundViolated naming the failing check; the certificate gets the margins.
void verify_form_bounds(const Hamiltonian& h_v, const Hamiltonian& h_0, FormBoundCertificate& cert,
                        std::size_t random_probes = 200, std::uint64_t seed = 1);

// Runs verify_form_bounds, doubling γ after each BoundViolated (at most
// max_doublings times).
FormBoundCertificate certify_form_bounds(const Hamiltonian& h_v, const Hamiltonian& h_0, double gamma,
                                         double R, int max_doublings = 10);

// (H ∔ V + shift)⁻¹ in the orthonormal coordinates. Throws ShiftInsideSpectrum
// unless λ_min + shift > 0.
SymMatrix resolvent(const Hamiltonian& h, double shift);

// ‖(R_U − R_V) + R_U diag(U − V) R_V‖_HS for two potentials on the same space.
double resolvent_identity_residual(const Hamiltonian& h_u, const Hamiltonian& h_v, double shift);

struct WeylReport {
  int dim = 1;
  double exponent = 0.0;        // least-squares slope of log λ_n vs log n, n ≤ n_free/4
  double c_prime = 0.0;         // min λ_n / n^{2/d} over n ≤ n_free/2, positive λ_n only
  bool lower_bound_holds = false;
  std::vector<double> s4_partial_sums;  // Σ_{k≤n} (λ_k + 1)⁻²
  double s4_sum = 0.0;
};

WeylReport weyl_check(const Hamiltonian& h0);

void write_spectrum_csv(const std::filesystem::path& path, const Hamiltonian& h);

}  // namespace specfun::schrodinger
