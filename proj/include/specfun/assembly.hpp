#pragma once

// P1 finite elements on a uniform 1D mesh of Ω = (0, length) with homogeneous
// Dirichlet conditions on a chosen end set D and natural conditions elsewhere.
// Everything is expressed on the free (unconstrained) nodes.
//
// Two L₂ realizations coexist: the consistent mass matrix M defines the
// W^{1,2}_D inner product J = K₁ + M and the Poincaré constant, while the
// lumped weights m_i pair potentials with densities, (w, u)_L = Σ m_i w_i u_i.
// Since M ≤ L ≤ M + (h²/6)K₁, the lumped norm is still dominated by the
// W^{1,2}_D norm whenever h² ≤ 6.

#include <array>
#include <cstddef>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "specfun/linalg.hpp"

namespace specfun::fem {

using linalg::SymMatrix;

enum class DirichletSpec { both_ends, left_only, right_only, none };

DirichletSpec parse_dirichlet(std::string_view text);
std::string_view to_string(DirichletSpec spec) noexcept;

struct DiscretizedDomain {
  int dim = 1;
  double length = 1.0;
  std::size_t n_cells = 0;
  DirichletSpec dirichlet_spec = DirichletSpec::both_ends;
  std::vector<double> nodes;                           // coordinates
  std::vector<std::array<std::size_t, 2>> elements;    // node pairs
  std::vector<bool> dirichlet;                         // per node
  std::vector<std::size_t> free_nodes;                 // node index of each free dof
  double h = 0.0;                                      // max element length

  std::size_t n_nodes() const noexcept { return nodes.size(); }
  std::size_t n_free() const noexcept { return free_nodes.size(); }
  bool has_dirichlet() const noexcept { return n_free() < n_nodes(); }
  // Coordinates of the free nodes, in dof order.
  std::vector<double> free_coordinates() const;
};

// Uniform mesh with n_cells ≥ 2 elements. Only dim = 1 is supported.
DiscretizedDomain build_domain(int dim, std::size_t n_cells, DirichletSpec dirichlet, double length = 1.0);

// Piecewise-constant positive coefficient, one value per element.
struct CoefficientField {
  std::vector<double> values;
  double lower_bound = 1.0;
  double upper_bound = 1.0;

  static CoefficientField constant(const DiscretizedDomain& domain, double c);
  // Bounds default to the min/max of the values.
  static CoefficientField from_values(std::vector<double> values);
  static CoefficientField from_values(std::vector<double> values, double lower, double upper);

  double max_value() const;
};

// Throws ShapeMismatch or InvalidArgument.
void validate(const CoefficientField& c, const DiscretizedDomain& domain);

// L₂ function represented by its values at the free nodes.
struct GridFunction {
  std::vector<double> values;

  std::size_t size() const noexcept { return values.size(); }
  static GridFunction zeros(std::size_t n) { return {std::vector<double>(n, 0.0)}; }
};

// Element of (W^{1,2}_D)*, represented by its action on the nodal basis.
struct Functional {
  std::vector<double> values;

  std::size_t size() const noexcept { return values.size(); }
  static Functional zeros(std::size_t n) { return {std::vector<double>(n, 0.0)}; }
};

GridFunction operator+(const GridFunction& a, const GridFunction& b);
GridFunction operator-(const GridFunction& a, const GridFunction& b);
GridFunction operator*(double s, const GridFunction& a);
Functional operator+(const Functional& a, const Functional& b);
Functional operator-(const Functional& a, const Functional& b);
Functional operator*(double s, const Functional& a);
// ⟨g, u⟩
double pairing(const Functional& g, const GridFunction& u);

// ∫ c ∇ψ·∇φ on the free nodes: tridiagonal, diagonal (c_l + c_r)/h, off-diagonal −c/h.
SymMatrix assemble_stiffness(const DiscretizedDomain& domain, const CoefficientField& coeff);

struct MassMatrices {
  SymMatrix consistent;                  // free nodes
  std::vector<double> lumped;            // free nodes
  std::vector<double> lumped_all_nodes;  // sums to |Ω|
};

MassMatrices mass_matrix(const DiscretizedDomain& domain);

// Immutable bundle of the matrices every downstream module needs. Cheap to
// copy (shared state); derived spectral constants are computed on first use.
class AssembledSpace {
 public:
  explicit AssembledSpace(DiscretizedDomain domain);

  const DiscretizedDomain& domain() const noexcept;
  std::size_t n_free() const noexcept;

  const SymMatrix& mass() const noexcept;                  // consistent M
  const std::vector<double>& lumped_weights() const noexcept;  // m_i
  const SymMatrix& unit_stiffness() const noexcept;        // K₁
  const SymMatrix& duality_matrix() const noexcept;        // J = K₁ + M
  const linalg::Cholesky& duality_factor() const noexcept;

  // 1/λ_min(K₁, M). Throws NoPoincare when D = ∅.
  double poincare_constant() const;
  // ‖I‖ for w ↦ L·w from (L₂, lumped) into (W^{1,2}_D)*, i.e. sup ‖u‖_L/‖u‖_J.
  double embedding_norm() const;

  double h_norm(const GridFunction& u) const;   // √(uᵀJu)
  double l2_norm(const GridFunction& u) const;  // lumped
  double l2_inner(const GridFunction& u, const GridFunction& v) const;  // lumped

 private:
  struct State;
  std::shared_ptr<State> state_;
};

double poincare_constant(const AssembledSpace& space);

// J⁻¹g, realizing the inverse duality map of W^{1,2}_D.
GridFunction duality_solve(const AssembledSpace& space, const Functional& g);
// √(gᵀJ⁻¹g)
double dual_norm(const AssembledSpace& space, const Functional& g);
// ι(w) = L·w, so that ⟨ι(w), u⟩ = (w, u)_L.
Functional embed_l2_functional(const AssembledSpace& space, const GridFunction& w);
// J·u
Functional apply_duality(const AssembledSpace& space, const GridFunction& u);

// Smallest λ with A x = λ B x for SPD A and B, by inverse iteration.
double min_generalized_eigenvalue(const SymMatrix& a, const SymMatrix& b);

}  // namespace specfun::fem
