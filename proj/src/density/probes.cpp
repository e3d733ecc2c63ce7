#include <algorithm>
#include <cmath>

#include "specfun/density.hpp"
#include "specfun/error.hpp"
#include "specfun/parallel.hpp"
#include "specfun/random.hpp"

namespace specfun::density {

std::pair<double, double> fermi_bracket(const Hamiltonian& h0, const DistributionFunction& dist, double N,
                                        double lambda) {
  std::vector<double> low, high;
  for (double l : h0.eigenvalues()) {
    low.push_back(0.25 * l - lambda);
    high.push_back(1.75 * l + lambda);
  }
  return {fermi_level(low, dist, N).level, fermi_level(high, dist, N).level};
}

namespace {

GridFunction random_in_ball(const AssembledSpace& space, Rng& rng, double radius) {
  GridFunction v{rng.normal_vector(space.n_free())};
  return (radius / space.l2_norm(v)) * v;
}

struct CaseResult {
  double ratio_M = 0.0, ratio_N = 0.0, ratio_fermi = 0.0, abs_fermi = 0.0;
  double halving_growth = 0.0;
  bool bracket_ok = true;
  bool finite = true;
};

}  // namespace

LipschitzReport lipschitz_probe(const AssembledSpace& space, const CoefficientField& m_coeff,
                                const DistributionFunction& dist, double R, double N, std::size_t cases,
                                std::uint64_t seed) {
  if (!(R > 0.0)) throw Error(ErrorCode::InvalidArgument, "R must be positive");
  LipschitzReport rep;
  rep.cases = cases;
  const Hamiltonian h0(space, m_coeff, GridFunction::zeros(space.n_free()));
  rep.gamma = schrodinger::estimate_gamma(space, m_coeff, seed).gamma;
  const double lambda = 1.0 + rep.gamma * R * R * R * R;
  const auto [t_lo, t_hi] = fermi_bracket(h0, dist, N, lambda);
  rep.bracket_lo = t_lo;
  rep.bracket_hi = t_hi;

  std::vector<CaseResult> results(cases);
  parallel_for(cases, [&](std::size_t i) {
    Rng rng(case_seed(seed, i));
    const GridFunction v = random_in_ball(space, rng, R * rng.uniform(0.2, 0.9));
    const double delta = R * std::pow(10.0, rng.uniform(-3.0, -1.0));
    const GridFunction w = random_in_ball(space, rng, delta);

    const auto hv = h0.with_potential(v);
    const auto hu = hv.with_potential(v + w);
    const auto hh = hv.with_potential(v + 0.5 * w);
    const auto dv = density_from(hv, dist, N);
    const auto du = density_from(hu, dist, N);
    const auto dh = density_from(hh, dist, N);
    const auto mv = density_M(hv, dist, 0.0);

    CaseResult& c = results[i];
    c.ratio_M = space.l2_norm(density_M(hu, dist, 0.0) - mv) / delta;
    c.ratio_N = space.l2_norm(du.rho - dv.rho) / delta;
    c.ratio_fermi = std::abs(du.fermi_level - dv.fermi_level) / delta;
    c.abs_fermi = std::abs(dv.fermi_level);
    const double half_M = space.l2_norm(density_M(hh, dist, 0.0) - mv) / (0.5 * delta);
    const double half_N = space.l2_norm(dh.rho - dv.rho) / (0.5 * delta);
    if (c.ratio_M > 0.0) c.halving_growth = std::max(c.halving_growth, half_M / c.ratio_M);
    if (c.ratio_N > 0.0) c.halving_growth = std::max(c.halving_growth, half_N / c.ratio_N);
    const double slack = 1e-9 * (1.0 + std::abs(dv.fermi_level));
    c.bracket_ok = dv.fermi_level >= t_lo - slack && dv.fermi_level <= t_hi + slack;
    c.finite = std::isfinite(c.ratio_M) && std::isfinite(c.ratio_N) && std::isfinite(c.ratio_fermi) &&
               std::isfinite(half_M) && std::isfinite(half_N);
  });

  for (const auto& c : results) {
    rep.worst_ratio_M = std::max(rep.worst_ratio_M, c.ratio_M);
    rep.worst_ratio_N = std::max(rep.worst_ratio_N, c.ratio_N);
    rep.worst_ratio_fermi = std::max(rep.worst_ratio_fermi, c.ratio_fermi);
    rep.max_abs_fermi = std::max(rep.max_abs_fermi, c.abs_fermi);
    rep.worst_halving_growth = std::max(rep.worst_halving_growth, c.halving_growth);
    rep.fermi_bracket_ok = rep.fermi_bracket_ok && c.bracket_ok;
    rep.all_finite = rep.all_finite && c.finite;
  }
  rep.halving_stable = rep.worst_halving_growth <= 2.0;
  return rep;
}

}  // namespace specfun::density
