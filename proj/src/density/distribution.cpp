#include <algorithm>
#include <cmath>
#include <limits>

#include "json.hpp"
#include "specfun/density.hpp"
#include "specfun/error.hpp"

namespace specfun::density {

DistributionFunction boltzmann() {
  DistributionFunction d;
  d.name = "boltzmann";
  d.f = [](double r) { return std::exp(-r); };
  d.f_prime = [](double r) { return -std::exp(-r); };
  d.f_inverse = [](double y) { return -std::log(y); };
  d.log_f = [](double r) { return -r; };
  d.sup_value = std::numeric_limits<double>::infinity();
  return d;
}

DistributionFunction fermi_dirac() {
  DistributionFunction d;
  d.name = "fermi_dirac";
  d.f = [](double r) {
    if (r > 0.0) {
      const double e = std::exp(-r);
      return e / (1.0 + e);
    }
    return 1.0 / (1.0 + std::exp(r));
  };
  d.f_prime = [f = d.f](double r) {
    const double v = f(r);
    return -v * (1.0 - v);
  };
  d.f_inverse = [](double y) { return std::log((1.0 - y) / y); };
  d.log_f = [](double r) { return -(std::max(r, 0.0) + std::log1p(std::exp(-std::abs(r)))); };
  d.sup_value = 1.0;
  return d;
}

std::vector<DistributionFunction> builtin_distributions() { return {boltzmann(), fermi_dirac()}; }

DistributionFunction distribution_by_name(const std::string& name) {
  if (name == "boltzmann") return boltzmann();
  if (name == "fermi_dirac" || name == "fermi-dirac") return fermi_dirac();
  throw Error(ErrorCode::InvalidArgument, "unknown distribution '" + name + "'");
}

bool DistributionCheck::ok() const {
  return decreasing && positive && std::isfinite(max_r4_f) && std::isfinite(max_r4_fprime) &&
         max_inverse_error <= 1e-10;
}

DistributionCheck check_distribution(const DistributionFunction& dist) {
  DistributionCheck c;
  c.decreasing = true;
  c.positive = true;
  double prev = dist.f(-30.0);
  for (int i = 1; i <= 6000; ++i) {
    const double r = -30.0 + 0.01 * i;
    const double v = dist.f(r);
    if (!(v < prev)) c.decreasing = false;
    if (!(v > 0.0)) c.positive = false;
    prev = v;
  }
  for (int i = 0; i <= 100000; ++i) {
    const double r = 0.01 * i;
    const double r4 = r * r * r * r;
    c.max_r4_f = std::max(c.max_r4_f, r4 * dist.f(r));
    c.max_r4_fprime = std::max(c.max_r4_fprime, r4 * std::abs(dist.f_prime(r)));
  }
  const double y_hi = std::isfinite(dist.sup_value) ? dist.sup_value : 10.0;
  for (int i = 1; i < 200; ++i) {
    const double y = y_hi * i / 200.0;
    c.max_inverse_error = std::max(c.max_inverse_error, std::abs(dist.f(dist.f_inverse(y)) - y));
  }
  return c;
}

void validate(const DistributionFunction& dist) {
  const auto c = check_distribution(dist);
  if (!c.ok()) throw Error(ErrorCode::InvariantViolation, "distribution '" + dist.name + "' fails its checks");
}

double weighted_sup(const DistributionFunction& dist, double lambda_ref, int k) {
  if (k < 0) throw Error(ErrorCode::InvalidArgument, "negative power");
  if (k == 0) return dist.f(-lambda_ref);
  // g(x) = k log x + log f(x − λ_ref) for x = r + λ_ref > 0.
  auto g = [&](double x) { return k * std::log(x) + dist.log_f(x - lambda_ref); };
  const int samples = 4000;
  const double lo = std::log(1e-8), hi = std::log(1e4 + std::abs(lambda_ref));
  int best = 0;
  double best_val = -std::numeric_limits<double>::infinity();
  for (int i = 0; i <= samples; ++i) {
    const double v = g(std::exp(lo + (hi - lo) * i / samples));
    if (v > best_val) best_val = v, best = i;
  }
  double a = std::exp(lo + (hi - lo) * std::max(best - 1, 0) / samples);
  double b = std::exp(lo + (hi - lo) * std::min(best + 1, samples) / samples);
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  for (int it = 0; it < 200 && b - a > 1e-14 * b; ++it) {
    const double x1 = b - phi * (b - a);
    const double x2 = a + phi * (b - a);
    if (g(x1) < g(x2)) a = x1;
    else b = x2;
  }
  return std::exp(std::max(best_val, g(0.5 * (a + b))));
}

std::array<double, 5> c_bounds(const DistributionFunction& dist, double lambda_ref) {
  std::array<double, 5> c{};
  for (int k = 0; k <= 4; ++k) c[k] = weighted_sup(dist, lambda_ref, k);
  return c;
}

double trace_f(const std::vector<double>& eigenvalues, const DistributionFunction& dist, double t) {
  double s = 0.0;
  for (double l : eigenvalues) s += std::exp(dist.log_f(l - t));
  return s;
}

double trace_f(const Hamiltonian& h, const DistributionFunction& dist, double t) {
  return trace_f(h.eigenvalues(), dist, t);
}

FermiResult fermi_level(const std::vector<double>& eigenvalues, const DistributionFunction& dist, double N,
                        double tol) {
  if (!(N > 0.0) || !std::isfinite(N)) throw Error(ErrorCode::InvalidArgument, "particle number must be positive");
  if (eigenvalues.empty()) throw Error(ErrorCode::InvalidArgument, "empty spectrum");
  if (N >= dist.sup_value * static_cast<double>(eigenvalues.size())) {
    throw Error(ErrorCode::BracketFailure, "N exceeds the largest attainable trace");
  }
  FermiResult r;
  r.N = N;
  r.tol = tol > 0.0 ? tol : 1e-10 * N;
  auto tr = [&](double t) { return trace_f(eigenvalues, dist, t); };

  std::vector<double> sorted = eigenvalues;
  std::nth_element(sorted.begin(), sorted.begin() + sorted.size() / 2, sorted.end());
  const double t0 = sorted[sorted.size() / 2];
  double lo = t0, hi = t0;
  for (double step = 1.0; tr(lo) > N; step *= 2.0) {
    if (++r.expansions > 1000) throw Error(ErrorCode::BracketFailure, "no lower bracket");
    lo = t0 - step;
  }
  for (double step = 1.0; tr(hi) < N; step *= 2.0) {
    if (++r.expansions > 1000) throw Error(ErrorCode::BracketFailure, "no upper bracket");
    hi = t0 + step;
  }

  double best = lo, best_err = std::abs(tr(lo) - N);
  if (const double e = std::abs(tr(hi) - N); e < best_err) best = hi, best_err = e;
  while (r.iterations < 400) {
    const double mid = lo + 0.5 * (hi - lo);
    if (mid <= lo || mid >= hi) break;
    ++r.iterations;
    const double v = tr(mid);
    if (const double e = std::abs(v - N); e <= best_err) best = mid, best_err = e;
    if (v < N) lo = mid;
    else hi = mid;
    if (best_err <= r.tol && hi - lo <= 4e-16 * std::max(1.0, std::abs(mid))) break;
  }
  if (!(best_err <= r.tol)) {
    throw Error(ErrorCode::NoConvergence, "trace misses N by " + std::to_string(best_err));
  }
  r.level = best;
  r.trace = tr(best);
  return r;
}

FermiResult fermi_level(const Hamiltonian& h, const DistributionFunction& dist, double N, double tol) {
  return fermi_level(h.eigenvalues(), dist, N, tol);
}

std::string to_json(const FermiResult& r) {
  nlohmann::ordered_json j;
  j["fermi_level"] = r.level;
  j["trace"] = r.trace;
  j["N"] = r.N;
  j["tol"] = r.tol;
  j["iterations"] = r.iterations;
  return j.dump(2);
}

}  // namespace specfun::density
