#include <algorithm>
#include <cmath>

#include "json.hpp"
#include "specfun/operator_inequalities.hpp"
#include "specfun/parallel.hpp"
#include "specfun/random.hpp"

namespace specfun::inequalities {
namespace {

using linalg::Matrix;

SymMatrix random_symmetric(Rng& rng, std::size_t n, double scale) {
  Matrix m(n, n);
  const double s = scale / std::sqrt(static_cast<double>(n));
  for (double& x : m.data()) x = s * rng.normal();
  return SymMatrix(std::move(m));
}

SymMatrix perturbation_of(Rng& rng, const SymMatrix& a, double scale) {
  const std::size_t n = a.size();
  const double sigma = scale * std::pow(10.0, rng.uniform(-3.0, 0.0));
  if (n > 1 && rng.uniform(0.0, 1.0) < 0.25) {
    // rank-one perturbation
    const auto v = rng.normal_vector(n);
    const double nv = linalg::norm2(v);
    Matrix m = a.matrix();
    const double sign = rng.uniform(0.0, 1.0) < 0.5 ? -1.0 : 1.0;
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t i = 0; i < n; ++i) m(i, j) += sign * sigma * v[i] * v[j] / (nv * nv);
    return SymMatrix(std::move(m));
  }
  return a + random_symmetric(rng, n, sigma);
}

LipschitzFunction draw_function(Family family, Rng& rng) {
  switch (family) {
    case Family::absolute:
      return absolute_value();
    case Family::clamp:
      return clamp_unit();
    case Family::soft_threshold:
      return soft_threshold(rng.uniform(0.0, 1.0));
    case Family::identity:
      return linear(1.0);
    case Family::piecewise_linear: {
      const std::size_t k = rng.index(3, 8);
      std::vector<double> knots(k), values(k);
      for (auto& x : knots) x = rng.uniform(-4.0, 4.0);
      std::sort(knots.begin(), knots.end());
      for (std::size_t i = 1; i < k; ++i) knots[i] = std::max(knots[i], knots[i - 1] + 1e-3);
      for (auto& y : values) y = 2.0 * rng.normal();
      return piecewise_linear(std::move(knots), std::move(values));
    }
  }
  throw Error(ErrorCode::InvalidArgument, "unknown family");
}

struct CaseResult {
  double ratio = 0.0;
  double parseval = 0.0;
  std::uint64_t seed = 0;
};

SuiteReport reduce(std::string family, const std::vector<CaseResult>& results, double tolerance) {
  SuiteReport report;
  report.family = std::move(family);
  report.cases = results.size();
  report.tolerance = tolerance;
  report.min_ratio = results.empty() ? 0.0 : results.front().ratio;
  bool first = true;
  for (const auto& r : results) {
    if (first || r.ratio > report.worst_ratio) {
      report.worst_ratio = r.ratio;
      report.worst_seed = r.seed;
      first = false;
    }
    report.min_ratio = std::min(report.min_ratio, r.ratio);
    report.worst_parseval_residual = std::max(report.worst_parseval_residual, r.parseval);
  }
  return report;
}

}  // namespace

std::string family_name(Family f) {
  switch (f) {
    case Family::absolute: return "abs";
    case Family::clamp: return "clamp";
    case Family::soft_threshold: return "soft_threshold";
    case Family::piecewise_linear: return "piecewise_linear";
    case Family::identity: return "identity";
  }
  return "unknown";
}

std::string resolvent_family_name(ResolventFamily f) {
  switch (f) {
    case ResolventFamily::exp_decay: return "exp(-x)";
    case ResolventFamily::resolvent: return "1/(x+lambda)";
    case ResolventFamily::x_exp_decay: return "x*exp(-x)";
  }
  return "unknown";
}

SuiteReport random_pair_suite(Family family, const SuiteOptions& opts) {
  if (opts.cases < 1 || opts.n_max < 1) throw Error(ErrorCode::InvalidArgument, "suite needs cases >= 1 and n_max >= 1");
  std::vector<CaseResult> results(opts.cases);
  parallel_for(opts.cases, [&](std::size_t i) {
    const std::uint64_t seed = case_seed(opts.seed, i);
    Rng rng(seed);
    const std::size_t n = rng.index(1, opts.n_max);
    const double scale = rng.uniform(0.5, 3.0);
    const SymMatrix a = random_symmetric(rng, n, scale);
    const SymMatrix b = opts.independent_pairs ? random_symmetric(rng, n, scale) : perturbation_of(rng, a, scale);
    const LipschitzFunction f = draw_function(family, rng);

    const auto ea = linalg::spectral_decompose(a).eigenvalues;
    const auto eb = linalg::spectral_decompose(b).eigenvalues;
    const double lo = std::min(ea.front(), eb.front()) - 1.0;
    const double hi = std::max(ea.back(), eb.back()) + 1.0;
    validate_lipschitz(f, lo, hi);

    results[i].ratio = bs_gap(a, b, f).ratio;
    results[i].parseval = parseval_double_sum(a, b, f).residual();
    results[i].seed = seed;
  });
  return reduce(family_name(family), results, opts.tolerance);
}

SuiteReport resolvent_pair_suite(ResolventFamily family, double rho, double lambda, const SuiteOptions& opts) {
  if (opts.cases < 1 || opts.n_max < 1) throw Error(ErrorCode::InvalidArgument, "suite needs cases >= 1 and n_max >= 1");
  ResolventTestFunction t;
  switch (family) {
    case ResolventFamily::exp_decay: t = exp_decay(rho, lambda); break;
    case ResolventFamily::resolvent: t = resolvent_itself(rho, lambda); break;
    case ResolventFamily::x_exp_decay: t = x_exp_decay(rho, lambda); break;
  }
  validate_resolvent_function(t);

  std::vector<CaseResult> results(opts.cases);
  parallel_for(opts.cases, [&](std::size_t i) {
    const std::uint64_t seed = case_seed(opts.seed, i);
    Rng rng(seed);
    const std::size_t n = rng.index(1, opts.n_max);
    const double width = 5.0;

    auto draw_spectrum = [&] {
      linalg::Vector s(n);
      for (auto& x : s) x = rho + rng.uniform(0.0, width);
      return s;
    };
    const auto basis_a = linalg::spectral_decompose(random_symmetric(rng, n, 1.0));
    const auto spec_a = draw_spectrum();
    linalg::SpectralDecomposition da{spec_a, basis_a.eigenvectors};
    const SymMatrix a = linalg::synthesize(da, spec_a);

    linalg::SpectralDecomposition db;
    if (opts.independent_pairs) {
      db = {draw_spectrum(), linalg::spectral_decompose(random_symmetric(rng, n, 1.0)).eigenvectors};
    } else {
      const double sigma = std::pow(10.0, rng.uniform(-3.0, 0.0));
      db.eigenvectors = linalg::spectral_decompose(perturbation_of(rng, a, sigma)).eigenvectors;
      db.eigenvalues = spec_a;
      for (auto& x : db.eigenvalues) x = std::clamp(x + sigma * rng.normal(), rho, rho + width);
    }
    const SymMatrix b = linalg::synthesize(db, db.eigenvalues);

    results[i].ratio = resolvent_gap(a, b, t).ratio;
    results[i].seed = seed;
  });
  return reduce(resolvent_family_name(family), results, opts.tolerance);
}

std::string to_json(const std::vector<SuiteReport>& reports) {
  nlohmann::ordered_json out = nlohmann::ordered_json::array();
  for (const auto& r : reports) {
    out.push_back({{"family", r.family},
                   {"cases", r.cases},
                   {"worst_ratio", r.worst_ratio},
                   {"worst_seed", r.worst_seed},
                   {"tolerance", r.tolerance},
                   {"min_ratio", r.min_ratio},
                   {"worst_parseval_residual", r.worst_parseval_residual},
                   {"passed", r.passed()}});
  }
  return out.dump(2) + "\n";
}

}  // namespace specfun::inequalities
