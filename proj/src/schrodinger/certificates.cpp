#include <algorithm>
#include <cmath>
#include <string>

#include "specfun/error.hpp"
#include "specfun/random.hpp"
#include "specfun/schrodinger.hpp"
#include "specfun/simd.hpp"

namespace specfun::schrodinger {

double gamma_from_c1(double c1, double m_sup) {
  const double c3 = c1 * c1 * c1;
  const double m1 = m_sup + 1.0;
  return c3 * c3 * m1 * m1 * m1 / 4.0;
}

namespace {

// ‖ψ‖_{L₆} / ‖ψ‖_{W^{1,2}} with lumped quadrature in both norms.
struct EmbeddingRatio {
  const std::vector<double>& m;
  const SymMatrix& w;

  double l6(const linalg::Vector& psi) const {
    double s = 0.0;
    for (std::size_t i = 0; i < psi.size(); ++i) {
      const double p2 = psi[i] * psi[i];
      s += m[i] * p2 * p2 * p2;
    }
    return std::pow(s, 1.0 / 6.0);
  }
  double w_norm(const linalg::Vector& psi) const {
    return std::sqrt(simd::dot(psi, linalg::multiply(w, psi)));
  }
  double operator()(const linalg::Vector& psi) const { return l6(psi) / w_norm(psi); }
};

}  // namespace

GammaEstimate estimate_gamma(const AssembledSpace& space, const CoefficientField& m_coeff,
                             std::uint64_t seed, double safety) {
  const std::size_t n = space.n_free();
  const auto& m = space.lumped_weights();
  const SymMatrix w = space.unit_stiffness() + SymMatrix::diagonal(m);
  const linalg::Cholesky wf(w);
  const EmbeddingRatio ratio{m, w};

  std::vector<linalg::Vector> starts;
  double best = 0.0;
  auto consider = [&](linalg::Vector psi) {
    const double r = ratio(psi);
    if (std::isfinite(r)) best = std::max(best, r);
    starts.push_back(std::move(psi));
  };

  std::size_t best_hat = 0;
  double best_hat_ratio = -1.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = std::pow(m[i], 1.0 / 6.0) / std::sqrt(w(i, i));
    if (r > best_hat_ratio) best_hat_ratio = r, best_hat = i;
  }
  best = std::max(best, best_hat_ratio);
  for (std::size_t i : {std::size_t{0}, n / 2, n - 1, best_hat}) {
    linalg::Vector e(n, 0.0);
    e[i] = 1.0;
    consider(std::move(e));
  }
  consider(linalg::Vector(n, 1.0));
  const auto x = space.domain().free_coordinates();
  const double len = space.domain().length;
  for (int k = 1; k <= 3; ++k) {
    linalg::Vector s(n);
    for (std::size_t i = 0; i < n; ++i) s[i] = std::sin(k * M_PI * x[i] / len) + 0.1;
    consider(std::move(s));
  }
  Rng rng(seed);
  for (int k = 0; k < 8; ++k) consider(rng.normal_vector(n));

  // Ascent for the convex functional Σ m ψ⁶ on the W-unit sphere.
  for (auto psi : starts) {
    for (int it = 0; it < 200; ++it) {
      linalg::Vector g(n);
      for (std::size_t i = 0; i < n; ++i) {
        const double p2 = psi[i] * psi[i];
        g[i] = m[i] * p2 * p2 * psi[i];
      }
      auto next = wf.solve(g);
      const double nn = ratio.w_norm(next);
      if (!(nn > 0.0) || !std::isfinite(nn)) break;
      simd::scale(1.0 / nn, next);
      const double before = ratio(psi);
      psi = std::move(next);
      const double after = ratio(psi);
      best = std::max(best, after);
      if (std::abs(after - before) <= 1e-13 * after) break;
    }
  }

  GammaEstimate est;
  est.c1_probe = best;
  est.safety = safety;
  est.c1 = best * safety;
  est.m_sup = m_coeff.max_value();
  est.gamma = gamma_from_c1(est.c1, est.m_sup);
  return est;
}

FormBoundCertificate FormBoundCertificate::make(double gamma, double R) {
  if (!(gamma > 0.0) || !(R >= 0.0)) throw Error(ErrorCode::InvalidArgument, "gamma > 0 and R >= 0 required");
  FormBoundCertificate c;
  c.gamma = gamma;
  c.R = R;
  c.lambda = 1.0 + gamma * R * R * R * R;
  return c;
}

namespace {

class CheckSet {
 public:
  explicit CheckSet(FormBoundCertificate& cert) : cert_(cert) {}

  void record(const std::string& name, double lhs, double rhs) {
    BoundCheck* c = find(name);
    const double margin = (rhs - lhs) / (1.0 + std::abs(lhs) + std::abs(rhs));
    if (c->probes == 0 || margin < c->worst_margin) c->worst_margin = margin;
    ++c->probes;
  }

  void finish() const {
    for (const auto& c : cert_.checks) {
      if (c.worst_margin < -1e-12) {
        throw Error(ErrorCode::BoundViolated,
                    c.name + " fails with relative margin " + std::to_string(c.worst_margin) +
                        " at gamma = " + std::to_string(cert_.gamma));
      }
    }
  }

 private:
  BoundCheck* find(const std::string& name) {
    for (auto& c : cert_.checks)
      if (c.name == name) return &c;
    cert_.checks.push_back({name, 0.0, 0});
    return &cert_.checks.back();
  }

  FormBoundCertificate& cert_;
};

}  // namespace

void verify_form_bounds(const Hamiltonian& h_v, const Hamiltonian& h_0, FormBoundCertificate& cert,
                        std::size_t random_probes, std::uint64_t seed) {
  const auto& space = h_v.space();
  if (h_0.size() != h_v.size()) throw Error(ErrorCode::ShapeMismatch, "operators live on different spaces");
  const double v_norm = space.l2_norm(h_v.potential());
  if (v_norm > cert.R * (1.0 + 1e-12)) {
    throw Error(ErrorCode::InvalidArgument, "potential norm " + std::to_string(v_norm) + " exceeds R");
  }
  cert.checks.clear();
  CheckSet checks(cert);
  const double lam = cert.lambda;
  const double v4 = v_norm * v_norm * v_norm * v_norm;

  auto probe = [&](const GridFunction& u) {
    const double t = h_0.form(u);
    const double nrm = space.l2_inner(u, u);
    const double pv = h_v.potential_form(u);
    const double tv = t + pv;
    checks.record("relative form bound", std::abs(pv), 0.75 * (t + nrm) + cert.gamma * v4 * nrm);
    checks.record("form sandwich lower", 0.25 * t - lam * nrm, tv);
    checks.record("form sandwich upper", tv, 1.75 * t + lam * nrm);
    checks.record("shifted form comparability", 0.25 * (t + nrm), tv + lam * nrm);
  };

  for (const auto* h : {&h_v, &h_0}) {
    const auto psi = h->eigenfunctions();
    for (std::size_t k = 0; k < psi.cols(); ++k) {
      const auto col = psi.col(k);
      probe(GridFunction{linalg::Vector(col.begin(), col.end())});
    }
  }
  Rng rng(seed);
  for (std::size_t p = 0; p < random_probes; ++p) probe(GridFunction{rng.normal_vector(h_v.size())});

  const auto& lv = h_v.eigenvalues();
  const auto& l0 = h_0.eigenvalues();
  for (std::size_t k = 0; k < lv.size(); ++k) {
    checks.record("eigenvalue sandwich lower", 0.25 * l0[k] - lam, lv[k]);
    checks.record("eigenvalue sandwich upper", lv[k], 1.75 * l0[k] + lam);
  }
  const double gap = h_v.lambda_min() + lam;
  checks.record("resolvent norm", gap > 0.0 ? 1.0 / gap : 1e300, 4.0);
  checks.finish();
}

FormBoundCertificate certify_form_bounds(const Hamiltonian& h_v, const Hamiltonian& h_0, double gamma,
                                         double R, int max_doublings) {
  for (int attempt = 0;; ++attempt) {
    auto cert = FormBoundCertificate::make(gamma, R);
    try {
      verify_form_bounds(h_v, h_0, cert);
      return cert;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::BoundViolated || attempt >= max_doublings) throw;
    }
    gamma *= 2.0;
  }
}

}  // namespace specfun::schrodinger
