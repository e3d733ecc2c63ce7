#include <cmath>

#include "specfun/density.hpp"
#include "specfun/error.hpp"
#include "specfun/io.hpp"
#include "specfun/simd.hpp"

namespace specfun::density {

namespace {

GridFunction density_from_occupations(const Hamiltonian& h, const std::vector<double>& occ) {
  const std::size_t n = h.size();
  GridFunction rho = GridFunction::zeros(n);
  const auto& phi = h.symmetric_eigenvectors();
  for (std::size_t k = 0; k < occ.size(); ++k) {
    if (occ[k] != 0.0) simd::accumulate_squares(occ[k], phi.col(k), rho.values);
  }
  const auto& w = h.inv_sqrt_weights();
  for (std::size_t i = 0; i < n; ++i) rho.values[i] *= w[i] * w[i];
  return rho;
}

std::vector<double> occupations(const Hamiltonian& h, const DistributionFunction& dist, double t) {
  std::vector<double> occ;
  occ.reserve(h.size());
  for (double l : h.eigenvalues()) occ.push_back(std::exp(dist.log_f(l - t)));
  return occ;
}

}  // namespace

GridFunction density_M(const Hamiltonian& h, const DistributionFunction& dist, double t) {
  return density_from_occupations(h, occupations(h, dist, t));
}

DensityResult density_from(const Hamiltonian& h, const DistributionFunction& dist, double N, double tol) {
  const auto fermi = fermi_level(h, dist, N, tol);
  DensityResult r;
  r.fermi_level = fermi.level;
  r.trace = fermi.trace;
  r.fermi_iterations = fermi.iterations;
  r.occupations = occupations(h, dist, fermi.level);
  r.rho = density_from_occupations(h, r.occupations);
  return r;
}

DensityResult density_N(const AssembledSpace& space, const CoefficientField& m_coeff,
                        const DistributionFunction& dist, const GridFunction& v, double N, double tol) {
  return density_from(Hamiltonian(space, m_coeff, v), dist, N, tol);
}

double monotonicity_probe(const AssembledSpace& space, const CoefficientField& m_coeff,
                          const DistributionFunction& dist, const GridFunction& u, const GridFunction& v,
                          double N) {
  const Hamiltonian hu(space, m_coeff, u);
  const auto hv = hu.with_potential(v);
  const auto nu = density_from(hu, dist, N).rho;
  const auto nv = density_from(hv, dist, N).rho;
  return space.l2_inner(nu - nv, u - v);
}

double monotonicity_probe_M(const AssembledSpace& space, const CoefficientField& m_coeff,
                            const DistributionFunction& dist, const GridFunction& u, const GridFunction& v) {
  const Hamiltonian hu(space, m_coeff, u);
  const auto hv = hu.with_potential(v);
  return space.l2_inner(density_M(hu, dist, 0.0) - density_M(hv, dist, 0.0), u - v);
}

std::vector<NuclearityRecord> nuclearity_check(const Hamiltonian& h, const DistributionFunction& dist,
                                               double lambda) {
  if (!(h.lambda_min() + lambda > 0.0)) {
    throw Error(ErrorCode::ShiftInsideSpectrum, "lambda_min + lambda must be positive");
  }
  double s4 = 0.0;
  for (double l : h.eigenvalues()) s4 += 1.0 / ((l + lambda) * (l + lambda));
  std::vector<NuclearityRecord> out;
  for (int k = 0; k <= 2; ++k) {
    NuclearityRecord rec;
    rec.k = k;
    for (double l : h.eigenvalues()) rec.lhs += std::pow(l + lambda, k) * dist.f(l);
    rec.rhs = s4 * weighted_sup(dist, lambda, k + 2);
    out.push_back(rec);
  }
  return out;
}

void write_density_csv(const std::filesystem::path& path, const AssembledSpace& space, const GridFunction& rho) {
  if (rho.size() != space.n_free()) throw Error(ErrorCode::ShapeMismatch, "density size differs from free nodes");
  io::write_csv(path, {"x_i", "m_i", "rho_i"},
                {space.domain().free_coordinates(), space.lumped_weights(), rho.values});
}

}  // namespace specfun::density
