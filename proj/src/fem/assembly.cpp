#include "specfun/assembly.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <string>

#include "specfun/error.hpp"
#include "specfun/simd.hpp"

namespace specfun::fem {

DirichletSpec parse_dirichlet(std::string_view text) {
  if (text == "both-ends" || text == "both_ends" || text == "both") return DirichletSpec::both_ends;
  if (text == "left-only" || text == "left_only" || text == "left") return DirichletSpec::left_only;
  if (text == "right-only" || text == "right_only" || text == "right") return DirichletSpec::right_only;
  if (text == "none") return DirichletSpec::none;
  throw Error(ErrorCode::InvalidArgument, "unknown dirichlet spec '" + std::string(text) + "'");
}

std::string_view to_string(DirichletSpec spec) noexcept {
  switch (spec) {
    case DirichletSpec::both_ends: return "both-ends";
    case DirichletSpec::left_only: return "left-only";
    case DirichletSpec::right_only: return "right-only";
    case DirichletSpec::none: return "none";
  }
  return "?";
}

std::vector<double> DiscretizedDomain::free_coordinates() const {
  std::vector<double> x;
  x.reserve(free_nodes.size());
  for (auto i : free_nodes) x.push_back(nodes[i]);
  return x;
}

DiscretizedDomain build_domain(int dim, std::size_t n_cells, DirichletSpec dirichlet, double length) {
  if (dim != 1) throw Error(ErrorCode::InvalidArgument, "only d = 1 meshes are supported");
  if (n_cells < 2) throw Error(ErrorCode::InvalidArgument, "n_cells must be at least 2");
  if (!(length > 0.0) || !std::isfinite(length)) {
    throw Error(ErrorCode::InvalidArgument, "domain length must be positive");
  }
  DiscretizedDomain d;
  d.dim = dim;
  d.length = length;
  d.n_cells = n_cells;
  d.dirichlet_spec = dirichlet;
  d.h = length / static_cast<double>(n_cells);
  d.nodes.resize(n_cells + 1);
  for (std::size_t i = 0; i <= n_cells; ++i) {
    d.nodes[i] = length * static_cast<double>(i) / static_cast<double>(n_cells);
  }
  d.elements.resize(n_cells);
  for (std::size_t e = 0; e < n_cells; ++e) d.elements[e] = {e, e + 1};
  d.dirichlet.assign(n_cells + 1, false);
  if (dirichlet == DirichletSpec::both_ends || dirichlet == DirichletSpec::left_only) d.dirichlet.front() = true;
  if (dirichlet == DirichletSpec::both_ends || dirichlet == DirichletSpec::right_only) d.dirichlet.back() = true;
  for (std::size_t i = 0; i <= n_cells; ++i) {
    if (!d.dirichlet[i]) d.free_nodes.push_back(i);
  }
  return d;
}

CoefficientField CoefficientField::constant(const DiscretizedDomain& domain, double c) {
  return from_values(std::vector<double>(domain.elements.size(), c), c, c);
}

CoefficientField CoefficientField::from_values(std::vector<double> values) {
  if (values.empty()) throw Error(ErrorCode::ShapeMismatch, "coefficient field is empty");
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  const double l = *lo;
  const double u = *hi;
  return from_values(std::move(values), l, u);
}

CoefficientField CoefficientField::from_values(std::vector<double> values, double lower, double upper) {
  CoefficientField c{std::move(values), lower, upper};
  if (!(lower > 0.0) || !(upper >= lower) || !std::isfinite(upper)) {
    throw Error(ErrorCode::InvalidArgument, "coefficient bounds must satisfy 0 < lower <= upper");
  }
  for (double v : c.values) {
    if (!std::isfinite(v)) throw Error(ErrorCode::NonFiniteValue, "coefficient value is not finite");
    if (v < lower || v > upper) {
      throw Error(ErrorCode::InvalidArgument, "coefficient value " + std::to_string(v) + " outside its bounds");
    }
  }
  return c;
}

double CoefficientField::max_value() const { return *std::max_element(values.begin(), values.end()); }

void validate(const CoefficientField& c, const DiscretizedDomain& domain) {
  if (c.values.size() != domain.elements.size()) {
    throw Error(ErrorCode::ShapeMismatch, "coefficient field has " + std::to_string(c.values.size()) +
                                              " values for " + std::to_string(domain.elements.size()) +
                                              " elements");
  }
  CoefficientField::from_values(c.values, c.lower_bound, c.upper_bound);
}

namespace {

void require_same(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    throw Error(ErrorCode::ShapeMismatch,
                std::string(what) + ": sizes " + std::to_string(a) + " and " + std::to_string(b));
  }
}

template <class T>
T combine(const T& a, const T& b, double sb) {
  require_same(a.size(), b.size(), "vector sum");
  T r = a;
  simd::axpy(sb, b.values, r.values);
  return r;
}

template <class T>
T scaled(double s, const T& a) {
  T r = a;
  simd::scale(s, r.values);
  return r;
}

}  // namespace

GridFunction operator+(const GridFunction& a, const GridFunction& b) { return combine(a, b, 1.0); }
GridFunction operator-(const GridFunction& a, const GridFunction& b) { return combine(a, b, -1.0); }
GridFunction operator*(double s, const GridFunction& a) { return scaled(s, a); }
Functional operator+(const Functional& a, const Functional& b) { return combine(a, b, 1.0); }
Functional operator-(const Functional& a, const Functional& b) { return combine(a, b, -1.0); }
Functional operator*(double s, const Functional& a) { return scaled(s, a); }

double pairing(const Functional& g, const GridFunction& u) {
  require_same(g.size(), u.size(), "pairing");
  return simd::dot(g.values, u.values);
}

namespace {

// Scatters 2×2 element blocks into the free-node matrix.
template <class Block>
SymMatrix assemble_free(const DiscretizedDomain& domain, Block&& block) {
  const std::size_t n = domain.n_free();
  std::vector<std::ptrdiff_t> dof(domain.n_nodes(), -1);
  for (std::size_t k = 0; k < n; ++k) dof[domain.free_nodes[k]] = static_cast<std::ptrdiff_t>(k);
  linalg::Matrix a(n, n);
  for (std::size_t e = 0; e < domain.elements.size(); ++e) {
    const auto& nodes = domain.elements[e];
    const double len = domain.nodes[nodes[1]] - domain.nodes[nodes[0]];
    const auto local = block(e, len);
    for (int r = 0; r < 2; ++r) {
      const auto gr = dof[nodes[r]];
      if (gr < 0) continue;
      for (int c = 0; c < 2; ++c) {
        const auto gc = dof[nodes[c]];
        if (gc < 0) continue;
        a(static_cast<std::size_t>(gr), static_cast<std::size_t>(gc)) += local[r][c];
      }
    }
  }
  return SymMatrix(std::move(a));
}

using Local = std::array<std::array<double, 2>, 2>;

}  // namespace

SymMatrix assemble_stiffness(const DiscretizedDomain& domain, const CoefficientField& coeff) {
  validate(coeff, domain);
  if (domain.n_free() == 0) throw Error(ErrorCode::ShapeMismatch, "domain has no free nodes");
  return assemble_free(domain, [&](std::size_t e, double len) {
    const double k = coeff.values[e] / len;
    return Local{{{k, -k}, {-k, k}}};
  });
}

MassMatrices mass_matrix(const DiscretizedDomain& domain) {
  MassMatrices out{assemble_free(domain,
                                 [](std::size_t, double len) {
                                   const double d = len / 3.0;
                                   const double o = len / 6.0;
                                   return Local{{{d, o}, {o, d}}};
                                 }),
                   {},
                   std::vector<double>(domain.n_nodes(), 0.0)};
  for (const auto& el : domain.elements) {
    const double half = 0.5 * (domain.nodes[el[1]] - domain.nodes[el[0]]);
    out.lumped_all_nodes[el[0]] += half;
    out.lumped_all_nodes[el[1]] += half;
  }
  out.lumped.reserve(domain.n_free());
  for (auto i : domain.free_nodes) out.lumped.push_back(out.lumped_all_nodes[i]);
  return out;
}

double min_generalized_eigenvalue(const SymMatrix& a, const SymMatrix& b) {
  if (a.size() != b.size()) throw Error(ErrorCode::DimensionMismatch, "pencil sizes differ");
  const linalg::Cholesky fa(a);
  const std::size_t n = a.size();
  // The ground state of these pencils has one sign, so a positive start vector
  // overlaps it; the small ramp breaks ties for symmetric configurations.
  linalg::Vector x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = 1.0 + 0.01 * static_cast<double>(i) / static_cast<double>(n);
  double theta = 0.0;
  for (int it = 0; it < 2000; ++it) {
    const auto bx = linalg::multiply(b, x);
    auto y = fa.solve(bx);
    const auto by = linalg::multiply(b, y);
    const double ynorm = std::sqrt(simd::dot(y, by));
    simd::scale(1.0 / ynorm, y);
    const auto ay = linalg::multiply(a, y);
    const double next = simd::dot(y, ay);  // yᵀBy = 1
    x = std::move(y);
    if (it > 2 && std::abs(next - theta) <= 1e-15 * std::abs(next)) return next;
    theta = next;
  }
  return theta;
}

struct AssembledSpace::State {
  DiscretizedDomain domain;
  MassMatrices mass;
  SymMatrix k1;
  SymMatrix j;
  linalg::Cholesky j_factor;

  std::once_flag poincare_once;
  double poincare = 0.0;
  std::once_flag embedding_once;
  double embedding = 0.0;

  explicit State(DiscretizedDomain d)
      : domain(std::move(d)),
        mass(mass_matrix(domain)),
        k1(assemble_stiffness(domain, CoefficientField::constant(domain, 1.0))),
        j(k1 + mass.consistent),
        j_factor(j) {}
};

AssembledSpace::AssembledSpace(DiscretizedDomain domain)
    : state_(std::make_shared<State>(std::move(domain))) {}

const DiscretizedDomain& AssembledSpace::domain() const noexcept { return state_->domain; }
std::size_t AssembledSpace::n_free() const noexcept { return state_->domain.n_free(); }
const SymMatrix& AssembledSpace::mass() const noexcept { return state_->mass.consistent; }
const std::vector<double>& AssembledSpace::lumped_weights() const noexcept { return state_->mass.lumped; }
const SymMatrix& AssembledSpace::unit_stiffness() const noexcept { return state_->k1; }
const SymMatrix& AssembledSpace::duality_matrix() const noexcept { return state_->j; }
const linalg::Cholesky& AssembledSpace::duality_factor() const noexcept { return state_->j_factor; }

double AssembledSpace::poincare_constant() const {
  if (!state_->domain.has_dirichlet()) {
    throw Error(ErrorCode::NoPoincare, "no Dirichlet nodes, constants lie in the kernel of the gradient");
  }
  std::call_once(state_->poincare_once, [s = state_.get()] {
    s->poincare = 1.0 / min_generalized_eigenvalue(s->k1, s->mass.consistent);
  });
  return state_->poincare;
}

double AssembledSpace::embedding_norm() const {
  std::call_once(state_->embedding_once, [s = state_.get()] {
    const auto l = SymMatrix::diagonal(s->mass.lumped);
    s->embedding = 1.0 / std::sqrt(min_generalized_eigenvalue(s->j, l));
  });
  return state_->embedding;
}

double AssembledSpace::h_norm(const GridFunction& u) const {
  require_same(u.size(), n_free(), "h_norm");
  const auto ju = linalg::multiply(state_->j, u.values);
  return std::sqrt(std::max(0.0, simd::dot(u.values, ju)));
}

double AssembledSpace::l2_norm(const GridFunction& u) const { return std::sqrt(l2_inner(u, u)); }

double AssembledSpace::l2_inner(const GridFunction& u, const GridFunction& v) const {
  require_same(u.size(), n_free(), "l2_inner");
  require_same(v.size(), n_free(), "l2_inner");
  const auto& m = state_->mass.lumped;
  return simd::weighted_dot(m, u.values, v.values);
}

double poincare_constant(const AssembledSpace& space) { return space.poincare_constant(); }

GridFunction duality_solve(const AssembledSpace& space, const Functional& g) {
  require_same(g.size(), space.n_free(), "duality_solve");
  return {space.duality_factor().solve(g.values)};
}

double dual_norm(const AssembledSpace& space, const Functional& g) {
  require_same(g.size(), space.n_free(), "dual_norm");
  // gᵀJ⁻¹g = ‖L⁻¹g‖² with J = LLᵀ.
  const auto y = space.duality_factor().solve_lower(g.values);
  return linalg::norm2(y);
}

Functional embed_l2_functional(const AssembledSpace& space, const GridFunction& w) {
  require_same(w.size(), space.n_free(), "embed_l2_functional");
  Functional g{w.values};
  const auto& m = space.lumped_weights();
  for (std::size_t i = 0; i < g.values.size(); ++i) g.values[i] *= m[i];
  return g;
}

Functional apply_duality(const AssembledSpace& space, const GridFunction& u) {
  require_same(u.size(), space.n_free(), "apply_duality");
  return {linalg::multiply(space.duality_matrix(), u.values)};
}

}  // namespace specfun::fem
