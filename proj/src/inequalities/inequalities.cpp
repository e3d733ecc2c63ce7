#include <algorithm>
#include <cmath>
#include <sstream>

#include "specfun/operator_inequalities.hpp"

namespace specfun::inequalities {
namespace {

void require_same_size(const SymMatrix& a, const SymMatrix& b) {
  if (a.size() != b.size()) throw Error(ErrorCode::DimensionMismatch, "operators differ in dimension");
}

GapRecord make_gap(double lhs, double rhs) { return {lhs, rhs, rhs > 0.0 ? lhs / rhs : 0.0}; }

void require_lower_bound(const linalg::SpectralDecomposition& dec, double rho, const char* which) {
  const double lowest = dec.eigenvalues.front();
  if (lowest < rho - 1e-12) {
    std::ostringstream msg;
    msg << which << " has eigenvalue " << lowest << " below the lower bound " << rho;
    throw Error(ErrorCode::LowerBoundViolated, msg.str());
  }
}

}  // namespace

GapRecord bs_gap(const SymMatrix& a, const SymMatrix& b, const LipschitzFunction& f) {
  require_same_size(a, b);
  const auto fa = linalg::matrix_function(linalg::spectral_decompose(a), f.eval);
  const auto fb = linalg::matrix_function(linalg::spectral_decompose(b), f.eval);
  return make_gap(linalg::hs_norm(fa - fb), f.lipschitz_constant * linalg::hs_norm(a - b));
}

double ParsevalRecord::residual() const { return std::abs(sum - hs_sq) / (1.0 + hs_sq); }

ParsevalRecord parseval_double_sum(const SymMatrix& a, const SymMatrix& b, const LipschitzFunction& f) {
  require_same_size(a, b);
  const auto da = linalg::spectral_decompose(a);
  const auto db = linalg::spectral_decompose(b);
  const std::size_t n = a.size();

  linalg::Vector fl(n), fm(n);
  for (std::size_t k = 0; k < n; ++k) {
    fl[k] = f(da.eigenvalues[k]);
    fm[k] = f(db.eigenvalues[k]);
  }
  const linalg::Matrix overlap = linalg::multiply_at_b(da.eigenvectors, db.eigenvectors);
  ParsevalRecord rec;
  for (std::size_t beta = 0; beta < n; ++beta) {
    for (std::size_t alpha = 0; alpha < n; ++alpha) {
      const double d = fl[alpha] - fm[beta];
      const double o = overlap(alpha, beta);
      rec.sum += d * d * o * o;
    }
  }
  const double hs = linalg::hs_norm(linalg::synthesize(da, fl) - linalg::synthesize(db, fm));
  rec.hs_sq = hs * hs;
  return rec;
}

GapRecord resolvent_gap(const SymMatrix& a, const SymMatrix& b, const ResolventTestFunction& t) {
  require_same_size(a, b);
  if (!(t.lambda + t.rho > 0.0)) throw Error(ErrorCode::InvalidArgument, "requires lambda > -rho");
  const auto da = linalg::spectral_decompose(a);
  const auto db = linalg::spectral_decompose(b);
  require_lower_bound(da, t.rho, "A");
  require_lower_bound(db, t.rho, "B");
  const double lambda = t.lambda;
  auto res = [lambda](double x) { return 1.0 / (x + lambda); };
  const double lhs = linalg::hs_norm(linalg::matrix_function(da, t.g) - linalg::matrix_function(db, t.g));
  const double diff = linalg::hs_norm(linalg::matrix_function(da, res) - linalg::matrix_function(db, res));
  return make_gap(lhs, t.l_res * diff);
}

GapRecord resolvent_lipschitz_gap(const SymMatrix& a, const SymMatrix& b, double rho, double lambda,
                                  const LipschitzFunction& f) {
  require_same_size(a, b);
  if (!(lambda + rho > 0.0)) throw Error(ErrorCode::InvalidArgument, "requires lambda > -rho");
  const auto da = linalg::spectral_decompose(a);
  const auto db = linalg::spectral_decompose(b);
  require_lower_bound(da, rho, "A");
  require_lower_bound(db, rho, "B");
  auto res = [lambda](double x) { return 1.0 / (x + lambda); };
  auto g = [&](double x) { return f(res(x)); };
  const double lhs = linalg::hs_norm(linalg::matrix_function(da, g) - linalg::matrix_function(db, g));
  const double diff = linalg::hs_norm(linalg::matrix_function(da, res) - linalg::matrix_function(db, res));
  return make_gap(lhs, f.lipschitz_constant * diff);
}

}  // namespace specfun::inequalities
