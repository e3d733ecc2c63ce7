#include <cmath>
#include <filesystem>
#include <sstream>

#include "json.hpp"
#include "specfun/density.hpp"
#include "specfun/io.hpp"
#include "specfun/operator_inequalities.hpp"
#include "specfun/schrodinger.hpp"
#include "specfun/sp.hpp"
#include "specfun_cli/config.hpp"

namespace specfun::cli {

namespace {

using json = nlohmann::ordered_json;

struct Scenario {
  fem::AssembledSpace space;
  fem::CoefficientField eps;
  fem::CoefficientField m;
  density::DistributionFunction dist;
  fem::GridFunction v0;
  fem::Functional q;
};

fem::CoefficientField coefficient(const std::vector<double>& values, double lower, double upper,
                                  std::size_t n_cells) {
  std::vector<double> v = values.size() == 1 ? std::vector<double>(n_cells, values.front()) : values;
  auto field = fem::CoefficientField::from_values(v);
  return fem::CoefficientField::from_values(std::move(v), lower > 0.0 ? lower : field.lower_bound,
                                            upper > 0.0 ? upper : field.upper_bound);
}

fem::Functional load_rhs(const RunConfig& cfg, const Scenario& s) {
  const auto& src = cfg.q;
  if (src.kind == GridSource::Kind::profile && src.profile == "constructed") {
    const auto d = density::density_N(s.space, s.m, s.dist, s.v0, cfg.N, cfg.fermi_tol);
    return -1.0 * fem::embed_l2_functional(s.space, d.rho);
  }
  auto g = load_grid_function(src, s.space);
  if (src.kind == GridSource::Kind::profile) return fem::embed_l2_functional(s.space, g);
  return {std::move(g.values)};
}

Scenario prepare(const RunConfig& cfg) {
  fem::AssembledSpace space(fem::build_domain(cfg.dim, cfg.n_cells, cfg.dirichlet, cfg.length));
  Scenario s{space,
             coefficient(cfg.eps, cfg.eps_lower, cfg.eps_upper, cfg.n_cells),
             coefficient(cfg.m, cfg.m_lower, cfg.m_upper, cfg.n_cells),
             density::distribution_by_name(cfg.distribution),
             load_grid_function(cfg.v0, space),
             {}};
  s.q = load_rhs(cfg, s);
  return s;
}

std::string csv(const std::vector<std::string>& header, const std::vector<std::vector<double>>& cols) {
  std::ostringstream out;
  io::write_csv(out, header, cols);
  return out.str();
}

json suite_json(const inequalities::SuiteReport& r) {
  return json::parse(inequalities::to_json({r}))[0];
}

RunOutcome verify_bs(const RunConfig& cfg) {
  using namespace inequalities;
  RunOutcome out;
  SuiteOptions opts;
  opts.n_max = cfg.n_max;
  opts.cases = cfg.cases;
  opts.seed = cfg.seed;
  opts.tolerance = cfg.bs_tolerance;
  json report;
  bool ok = true;
  report["lipschitz"] = json::array();
  for (Family f : {Family::absolute, Family::clamp, Family::soft_threshold, Family::piecewise_linear}) {
    const auto r = random_pair_suite(f, opts);
    const bool pass = r.passed() && r.worst_parseval_residual <= 1e-8;
    ok = ok && pass;
    report["lipschitz"].push_back(suite_json(r));
  }
  SuiteOptions sat = opts;
  sat.cases = cfg.saturation_cases;
  const auto s = random_pair_suite(Family::identity, sat);
  const bool sat_ok = s.worst_ratio <= 1.0 + 1e-12 && s.min_ratio >= 1.0 - 1e-12;
  ok = ok && sat_ok;
  report["saturation"] = suite_json(s);
  report["saturation"]["passed"] = sat_ok;
  report["resolvent"] = json::array();
  SuiteOptions res = opts;
  res.cases = cfg.resolvent_cases;
  for (ResolventFamily f : {ResolventFamily::exp_decay, ResolventFamily::resolvent, ResolventFamily::x_exp_decay}) {
    const auto r = resolvent_pair_suite(f, cfg.rho, cfg.lambda, res);
    ok = ok && r.passed();
    report["resolvent"].push_back(suite_json(r));
  }
  report["passed"] = ok;
  out.files["bs_report.json"] = report.dump(2) + "\n";
  out.summary = std::string("verify-bs: ") + (ok ? "all suites passed" : "a suite failed");
  out.exit_code = ok ? 0 : 4;
  return out;
}

RunOutcome spectrum(const Scenario& s) {
  RunOutcome out;
  const schrodinger::Hamiltonian h(s.space, s.m, s.v0);
  std::vector<double> idx(h.size());
  for (std::size_t k = 0; k < idx.size(); ++k) idx[k] = static_cast<double>(k + 1);
  out.files["spectrum.csv"] = csv({"n", "lambda_n"}, {idx, h.eigenvalues()});
  const auto w = schrodinger::weyl_check(h);
  json j;
  j["n_free"] = h.size();
  j["lambda_min"] = h.lambda_min();
  j["weyl_exponent"] = w.exponent;
  j["c_prime"] = w.c_prime;
  j["lower_bound_holds"] = w.lower_bound_holds;
  j["s4_partial_sum"] = w.s4_sum;
  out.files["weyl.json"] = j.dump(2) + "\n";
  out.summary = "spectrum: " + std::to_string(h.size()) + " eigenvalues, lowest " + io::format_double(h.lambda_min());
  return out;
}

RunOutcome fermi(const RunConfig& cfg, const Scenario& s) {
  RunOutcome out;
  const schrodinger::Hamiltonian h(s.space, s.m, s.v0);
  const auto r = density::fermi_level(h, s.dist, cfg.N, cfg.fermi_tol);
  out.files["fermi.json"] = density::to_json(r) + "\n";
  out.summary = "fermi: level " + io::format_double(r.level) + " after " + std::to_string(r.iterations) +
                " bisection steps";
  return out;
}

RunOutcome density_cmd(const RunConfig& cfg, const Scenario& s) {
  RunOutcome out;
  const schrodinger::Hamiltonian h(s.space, s.m, s.v0);
  const auto fr = density::fermi_level(h, s.dist, cfg.N, cfg.fermi_tol);
  const auto d = density::density_from(h, s.dist, cfg.N, cfg.fermi_tol);
  const auto& w = s.space.lumped_weights();
  double mass = 0.0;
  bool nonnegative = true;
  for (std::size_t i = 0; i < w.size(); ++i) {
    mass += w[i] * d.rho.values[i];
    nonnegative = nonnegative && d.rho.values[i] >= 0.0;
  }
  const bool ok = nonnegative && std::abs(mass - cfg.N) <= fr.tol + 1e-9;
  out.files["density.csv"] = csv({"x_i", "m_i", "rho_i"}, {s.space.domain().free_coordinates(), w, d.rho.values});
  out.files["fermi.json"] = density::to_json(fr) + "\n";
  out.summary = "density: mass " + io::format_double(mass) + (ok ? "" : " (normalization violated)");
  out.exit_code = ok ? 0 : 4;
  return out;
}

RunOutcome solve_sp_cmd(const RunConfig& cfg, const Scenario& s) {
  RunOutcome out;
  sp::SPProblem p{s.space, s.eps, s.m, s.dist, cfg.N, s.v0, s.q};
  sp::SPOptions opts;
  opts.tol = cfg.tol;
  opts.constants.probes = cfg.probes;
  opts.constants.seed = cfg.seed;
  const auto sol = sp::solve_sp(p, opts);
  out.files["sp_report.json"] = sp::to_json(p, sol) + "\n";
  out.files["solution.csv"] =
      csv({"x_i", "V_i", "rho_i"}, {s.space.domain().free_coordinates(), sol.V.values, sol.density.values});
  std::vector<double> k(sol.trace.h_norms.size());
  for (std::size_t i = 0; i < k.size(); ++i) k[i] = static_cast<double>(i + 1);
  out.files["trace.csv"] =
      csv({"k", "h_norm", "residual", "ratio"}, {k, sol.trace.h_norms, sol.trace.residuals, sol.trace.ratios});
  out.summary = "solve-sp: " + std::to_string(sol.trace.iterations) + " iterations, |V|_H = " +
                io::format_double(sol.h_norm) + ", residual " + io::format_double(sol.residual);
  return out;
}

RunOutcome probe_constants(const RunConfig& cfg, const Scenario& s) {
  RunOutcome out;
  json j;
  bool ok = true;
  const double c_P = s.space.poincare_constant();
  j["c_P"] = c_P;
  j["embedding_norm"] = s.space.embedding_norm();
  const auto g = schrodinger::estimate_gamma(s.space, s.m, cfg.seed);
  j["c1_probe"] = g.c1_probe;
  j["c1"] = g.c1;
  j["gamma_estimate"] = g.gamma;

  const double R = cfg.R > 0.0 ? cfg.R : std::max(1.0, s.space.l2_norm(s.v0));
  const schrodinger::Hamiltonian h0(s.space, s.m, fem::GridFunction::zeros(s.space.n_free()));
  const auto hv = h0.with_potential(s.v0);
  const auto cert = schrodinger::certify_form_bounds(hv, h0, g.gamma, R);
  auto& jc = j["form_bounds"];
  jc["gamma"] = cert.gamma;
  jc["R"] = cert.R;
  jc["lambda"] = cert.lambda;
  for (const auto& c : cert.checks) jc["margins"][c.name] = c.worst_margin;

  const auto lp = density::lipschitz_probe(s.space, s.m, s.dist, R, cfg.N, cfg.probe_cases, cfg.seed);
  auto& jl = j["density_lipschitz"];
  jl["cases"] = lp.cases;
  jl["worst_ratio_M"] = lp.worst_ratio_M;
  jl["worst_ratio_N"] = lp.worst_ratio_N;
  jl["worst_ratio_fermi"] = lp.worst_ratio_fermi;
  jl["max_abs_fermi"] = lp.max_abs_fermi;
  jl["worst_halving_growth"] = lp.worst_halving_growth;
  jl["fermi_bracket"] = {lp.bracket_lo, lp.bracket_hi};
  jl["passed"] = lp.passed();
  ok = ok && lp.passed();

  sp::SPProblem p{s.space, s.eps, s.m, s.dist, cfg.N, s.v0, s.q};
  sp::ConstantOptions copts;
  copts.probes = cfg.probes;
  copts.seed = cfg.seed;
  const double rhs = fem::dual_norm(s.space, s.q + sp::embedded_density(p, s.v0));
  const auto c = sp::estimate_constants(p, 2.0 / (s.eps.lower_bound / (1.0 + c_P)) * rhs, copts);
  auto& js = j["sp_constants"];
  js["m"] = c.m;
  js["M"] = c.M;
  js["R"] = c.R;
  js["density_lipschitz"] = c.density_lipschitz;
  j["passed"] = ok;
  out.files["constants.json"] = j.dump(2) + "\n";
  out.summary = std::string("probe-constants: ") + (ok ? "all checks passed" : "a check failed");
  out.exit_code = ok ? 0 : 4;
  return out;
}

}  // namespace

RunOutcome run(const RunConfig& cfg) {
  RunOutcome out;
  if (cfg.command == Command::verify_bs) {
    out = verify_bs(cfg);
  } else {
    const Scenario s = prepare(cfg);
    switch (cfg.command) {
      case Command::spectrum: out = spectrum(s); break;
      case Command::fermi: out = fermi(cfg, s); break;
      case Command::density: out = density_cmd(cfg, s); break;
      case Command::solve_sp: out = solve_sp_cmd(cfg, s); break;
      case Command::probe_constants: out = probe_constants(cfg, s); break;
      case Command::verify_bs: break;
    }
  }
  std::filesystem::create_directories(cfg.out);
  for (const auto& [name, content] : out.files) io::write_text(cfg.out / name, content);
  return out;
}

}  // namespace specfun::cli
