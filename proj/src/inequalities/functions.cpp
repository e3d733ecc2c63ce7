#include <algorithm>
#include <cmath>
#include <sstream>

#include "specfun/operator_inequalities.hpp"
#include "specfun/random.hpp"

namespace specfun::inequalities {

double sampled_lipschitz(const LipschitzFunction& f, double lo, double hi, std::size_t samples,
                         std::uint64_t seed) {
  if (!(hi > lo)) return 0.0;
  samples = std::max<std::size_t>(samples, 2);
  std::vector<double> xs(samples);
  std::vector<double> ys(samples);
  for (std::size_t i = 0; i < samples; ++i) {
    xs[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(samples - 1);
    ys[i] = f(xs[i]);
  }
  double worst = 0.0;
  for (std::size_t i = 0; i + 1 < samples; ++i) {
    worst = std::max(worst, std::abs(ys[i + 1] - ys[i]) / (xs[i + 1] - xs[i]));
  }
  Rng rng(seed);
  for (std::size_t k = 0; k < samples; ++k) {
    const double x = rng.uniform(lo, hi);
    const double y = rng.uniform(lo, hi);
    if (x == y) continue;
    worst = std::max(worst, std::abs(f(x) - f(y)) / std::abs(x - y));
  }
  return worst;
}

void validate_lipschitz(const LipschitzFunction& f, double lo, double hi) {
  if (!(hi > lo)) return;
  const std::size_t samples = 2001;
  std::vector<double> xs(samples);
  for (std::size_t i = 0; i < samples; ++i) {
    xs[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(samples - 1);
  }
  Rng rng(samples);
  for (std::size_t k = 0; k < 2 * samples; ++k) {
    double x, y;
    if (k + 1 < samples) {
      x = xs[k];
      y = xs[k + 1];
    } else {
      x = rng.uniform(lo, hi);
      y = rng.uniform(lo, hi);
    }
    const double excess = std::abs(f(x) - f(y)) - f.lipschitz_constant * std::abs(x - y);
    if (excess > 1e-12) {
      std::ostringstream msg;
      msg << f.descriptor << ": |f(x)-f(y)| exceeds " << f.lipschitz_constant << "|x-y| by " << excess
          << " at x = " << x << ", y = " << y;
      throw Error(ErrorCode::BoundViolated, msg.str());
    }
  }
}

LipschitzFunction linear(double slope) {
  return {[slope](double x) { return slope * x; }, std::abs(slope), "linear(" + std::to_string(slope) + ")"};
}

LipschitzFunction absolute_value() {
  return {[](double x) { return std::abs(x); }, 1.0, "abs"};
}

LipschitzFunction clamp_unit() {
  return {[](double x) { return std::clamp(x, -1.0, 1.0); }, 1.0, "clamp[-1,1]"};
}

LipschitzFunction soft_threshold(double tau) {
  return {[tau](double x) {
            if (x > tau) return x - tau;
            if (x < -tau) return x + tau;
            return 0.0;
          },
          1.0, "soft_threshold(" + std::to_string(tau) + ")"};
}

LipschitzFunction piecewise_linear(std::vector<double> knots, std::vector<double> values) {
  if (knots.size() != values.size() || knots.empty()) {
    throw Error(ErrorCode::ShapeMismatch, "piecewise-linear knots and values differ in length");
  }
  for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
    if (!(knots[i + 1] > knots[i])) throw Error(ErrorCode::InvalidArgument, "knots must increase strictly");
  }
  double l = 0.0;
  for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
    l = std::max(l, std::abs((values[i + 1] - values[i]) / (knots[i + 1] - knots[i])));
  }
  auto eval = [knots = std::move(knots), values = std::move(values)](double x) {
    if (x <= knots.front()) return values.front();
    if (x >= knots.back()) return values.back();
    const auto it = std::upper_bound(knots.begin(), knots.end(), x);
    const std::size_t i = static_cast<std::size_t>(it - knots.begin()) - 1;
    const double w = (x - knots[i]) / (knots[i + 1] - knots[i]);
    return values[i] + w * (values[i + 1] - values[i]);
  };
  return {std::move(eval), l, "piecewise_linear"};
}

void validate_resolvent_function(const ResolventTestFunction& t) {
  if (!(t.lambda + t.rho > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, t.descriptor + ": requires lambda + rho > 0");
  }
  const int points = 4000;
  for (int k = 0; k <= points; ++k) {
    // 0 followed by a geometric grid of offsets 1e−6 … 1e6.
    const double offset = k == 0 ? 0.0 : std::pow(10.0, -6.0 + 12.0 * (k - 1) / (points - 1));
    const double x = t.rho + offset;
    const double w = (x + t.lambda) * (x + t.lambda) * std::abs(t.g_prime(x));
    if (w > t.l_res * (1.0 + 1e-12) + 1e-12) {
      std::ostringstream msg;
      msg << t.descriptor << ": (x+lambda)^2|g'(x)| = " << w << " exceeds L_res = " << t.l_res
          << " at x = " << x;
      throw Error(ErrorCode::BoundViolated, msg.str());
    }
  }
}

ResolventTestFunction exp_decay(double rho, double lambda) {
  // d/dx (x+λ)²e^{−x} = (x+λ)(2 − x − λ)e^{−x}: interior maximum at x = 2 − λ.
  auto weight = [lambda](double x) { return (x + lambda) * (x + lambda) * std::exp(-x); };
  double l = weight(rho);
  if (2.0 - lambda >= rho) l = std::max(l, weight(2.0 - lambda));
  return {[](double x) { return std::exp(-x); }, [](double x) { return -std::exp(-x); }, rho, lambda, l,
          "exp(-x)"};
}

ResolventTestFunction resolvent_itself(double rho, double lambda) {
  return {[lambda](double x) { return 1.0 / (x + lambda); },
          [lambda](double x) { return -1.0 / ((x + lambda) * (x + lambda)); },
          rho,
          lambda,
          1.0,
          "1/(x+lambda)"};
}

ResolventTestFunction x_exp_decay(double rho, double lambda) {
  // w(x) = (x+λ)²(1−x)e^{−x}; w′ vanishes where −x² + (4−λ)x + 2λ − 2 = 0,
  // i.e. x = ((4−λ) ± √(λ²+8))/2. |w| is maximal at ρ or at one of these.
  auto weight = [lambda](double x) { return std::abs((x + lambda) * (x + lambda) * (1.0 - x) * std::exp(-x)); };
  double l = weight(rho);
  const double disc = std::sqrt(lambda * lambda + 8.0);
  for (double x : {0.5 * ((4.0 - lambda) + disc), 0.5 * ((4.0 - lambda) - disc)}) {
    if (x >= rho) l = std::max(l, weight(x));
  }
  return {[](double x) { return x * std::exp(-x); }, [](double x) { return (1.0 - x) * std::exp(-x); }, rho,
          lambda, l, "x*exp(-x)"};
}

}  // namespace specfun::inequalities
