#include <cmath>
#include <fstream>

#include "specfun/error.hpp"
#include "specfun/io.hpp"
#include "specfun/schrodinger.hpp"
#include "specfun/simd.hpp"

namespace specfun::schrodinger {

struct Hamiltonian::Shared {
  AssembledSpace space;
  CoefficientField m_coeff;
  SymMatrix k_m;
  std::vector<double> inv_sqrt;
  SymMatrix s0;  // L^{-1/2} K_m L^{-1/2}
};

namespace {

CoefficientField reciprocal(const CoefficientField& m) {
  std::vector<double> inv(m.values.size());
  for (std::size_t e = 0; e < inv.size(); ++e) inv[e] = 1.0 / m.values[e];
  return CoefficientField::from_values(std::move(inv), 1.0 / m.upper_bound, 1.0 / m.lower_bound);
}

SymMatrix with_diagonal(const SymMatrix& s0, const GridFunction& v) {
  return s0 + SymMatrix::diagonal(v.values);
}

void check_potential(const AssembledSpace& space, const GridFunction& v) {
  if (v.size() != space.n_free()) {
    throw Error(ErrorCode::ShapeMismatch, "potential has " + std::to_string(v.size()) + " values for " +
                                              std::to_string(space.n_free()) + " free nodes");
  }
  for (double x : v.values) {
    if (!std::isfinite(x)) throw Error(ErrorCode::NonFiniteValue, "potential value is not finite");
  }
}

}  // namespace

Hamiltonian::Hamiltonian(const AssembledSpace& space, const CoefficientField& m_coeff, GridFunction v)
    : Hamiltonian(
          [&] {
            fem::validate(m_coeff, space.domain());
            const auto& m = space.lumped_weights();
            std::vector<double> inv_sqrt(m.size());
            for (std::size_t i = 0; i < m.size(); ++i) inv_sqrt[i] = 1.0 / std::sqrt(m[i]);
            auto k_m = fem::assemble_stiffness(space.domain(), reciprocal(m_coeff));
            linalg::Matrix a = k_m.matrix();
            for (std::size_t j = 0; j < a.cols(); ++j)
              for (std::size_t i = 0; i < a.rows(); ++i) a(i, j) *= inv_sqrt[i] * inv_sqrt[j];
            return std::make_shared<const Shared>(
                Shared{space, m_coeff, std::move(k_m), std::move(inv_sqrt), SymMatrix(std::move(a))});
          }(),
          std::move(v), nullptr) {}

Hamiltonian::Hamiltonian(std::shared_ptr<const Shared> shared, GridFunction v, const linalg::Matrix* warm)
    : shared_(std::move(shared)), v_(std::move(v)), s_(SymMatrix::zeros(1)) {
  check_potential(shared_->space, v_);
  s_ = with_diagonal(shared_->s0, v_);
  dec_ = warm ? linalg::spectral_decompose(s_, *warm) : linalg::spectral_decompose(s_);
}

Hamiltonian Hamiltonian::with_potential(GridFunction v) const {
  return Hamiltonian(shared_, std::move(v), &dec_.eigenvectors);
}

const AssembledSpace& Hamiltonian::space() const noexcept { return shared_->space; }
const CoefficientField& Hamiltonian::m_coeff() const noexcept { return shared_->m_coeff; }
const SymMatrix& Hamiltonian::stiffness() const noexcept { return shared_->k_m; }
const std::vector<double>& Hamiltonian::inv_sqrt_weights() const noexcept { return shared_->inv_sqrt; }

linalg::Matrix Hamiltonian::eigenfunctions() const {
  linalg::Matrix psi = dec_.eigenvectors;
  const auto& w = shared_->inv_sqrt;
  for (std::size_t j = 0; j < psi.cols(); ++j)
    for (std::size_t i = 0; i < psi.rows(); ++i) psi(i, j) *= w[i];
  return psi;
}

double Hamiltonian::form(const GridFunction& u) const {
  if (u.size() != size()) throw Error(ErrorCode::ShapeMismatch, "form argument size");
  return simd::dot(u.values, linalg::multiply(shared_->k_m, u.values));
}

double Hamiltonian::potential_form(const GridFunction& u) const {
  if (u.size() != size()) throw Error(ErrorCode::ShapeMismatch, "form argument size");
  const auto& m = shared_->space.lumped_weights();
  double s = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) s += m[i] * v_.values[i] * u.values[i] * u.values[i];
  return s;
}

Hamiltonian build_hamiltonian(const AssembledSpace& space, const CoefficientField& m_coeff, GridFunction v) {
  return Hamiltonian(space, m_coeff, std::move(v));
}

SymMatrix resolvent(const Hamiltonian& h, double shift) {
  if (!(h.lambda_min() + shift > 0.0)) {
    throw Error(ErrorCode::ShiftInsideSpectrum,
                "shift " + std::to_string(shift) + " with lowest eigenvalue " + std::to_string(h.lambda_min()));
  }
  return linalg::matrix_function(h.decomposition(), [shift](double x) { return 1.0 / (x + shift); });
}

double resolvent_identity_residual(const Hamiltonian& h_u, const Hamiltonian& h_v, double shift) {
  if (h_u.size() != h_v.size()) throw Error(ErrorCode::ShapeMismatch, "potentials live on different spaces");
  const auto r_u = resolvent(h_u, shift);
  const auto r_v = resolvent(h_v, shift);
  // R_U diag(U − V) R_V
  linalg::Matrix scaled = r_v.matrix();
  for (std::size_t j = 0; j < scaled.cols(); ++j)
    for (std::size_t i = 0; i < scaled.rows(); ++i)
      scaled(i, j) *= h_u.potential().values[i] - h_v.potential().values[i];
  const auto product = linalg::multiply(r_u.matrix(), scaled);
  return linalg::hs_norm((r_u.matrix() - r_v.matrix()) + product);
}

WeylReport weyl_check(const Hamiltonian& h0) {
  WeylReport rep;
  rep.dim = h0.space().domain().dim;
  const auto& lam = h0.eigenvalues();
  const std::size_t n = lam.size();
  const double power = 2.0 / rep.dim;

  // Least-squares slope of log λ_k against log k.
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t cnt = 0;
  for (std::size_t k = 1; k <= std::max<std::size_t>(n / 4, 1); ++k) {
    if (!(lam[k - 1] > 0.0)) continue;
    const double x = std::log(static_cast<double>(k));
    const double y = std::log(lam[k - 1]);
    sx += x, sy += y, sxx += x * x, sxy += x * y, ++cnt;
  }
  if (cnt >= 2) rep.exponent = (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);

  const std::size_t half = std::max<std::size_t>(n / 2, 1);
  bool first = true;
  for (std::size_t k = 1; k <= half; ++k) {
    if (!(lam[k - 1] > 0.0)) continue;
    const double c = lam[k - 1] / std::pow(static_cast<double>(k), power);
    if (first || c < rep.c_prime) rep.c_prime = c;
    first = false;
  }
  rep.lower_bound_holds = !first && rep.c_prime > 0.0;

  double s = 0.0;
  rep.s4_partial_sums.reserve(n);
  for (double l : lam) {
    s += 1.0 / ((l + 1.0) * (l + 1.0));
    rep.s4_partial_sums.push_back(s);
  }
  rep.s4_sum = s;
  return rep;
}

void write_spectrum_csv(const std::filesystem::path& path, const Hamiltonian& h) {
  std::vector<double> idx(h.size());
  for (std::size_t k = 0; k < idx.size(); ++k) idx[k] = static_cast<double>(k + 1);
  io::write_csv(path, {"n", "lambda_n"}, {idx, h.eigenvalues()});
}

}  // namespace specfun::schrodinger
