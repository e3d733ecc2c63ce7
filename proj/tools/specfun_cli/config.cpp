#include "specfun_cli/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "specfun/io.hpp"

namespace specfun::cli {

Command parse_command(std::string_view text) {
  if (text == "verify-bs") return Command::verify_bs;
  if (text == "spectrum") return Command::spectrum;
  if (text == "fermi") return Command::fermi;
  if (text == "density") return Command::density;
  if (text == "solve-sp") return Command::solve_sp;
  if (text == "probe-constants") return Command::probe_constants;
  throw Error(ErrorCode::ConfigParse, "unknown command '" + std::string(text) + "'");
}

std::string_view to_string(Command c) noexcept {
  switch (c) {
    case Command::verify_bs: return "verify-bs";
    case Command::spectrum: return "spectrum";
    case Command::fermi: return "fermi";
    case Command::density: return "density";
    case Command::solve_sp: return "solve-sp";
    case Command::probe_constants: return "probe-constants";
  }
  return "?";
}

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

[[noreturn]] void bad_value(const std::string& key, const std::string& value, const std::string& why) {
  throw Error(ErrorCode::ConfigParse, key + " = '" + value + "': " + why);
}

double to_double(const std::string& key, const std::string& value) {
  const auto list = io::parse_number_list(value);
  if (list.size() != 1) bad_value(key, value, "expected one number");
  return list.front();
}

double to_positive(const std::string& key, const std::string& value) {
  const double v = to_double(key, value);
  if (!(v > 0.0)) bad_value(key, value, "must be positive");
  return v;
}

std::uint64_t to_unsigned(const std::string& key, const std::string& value) {
  std::uint64_t v = 0;
  const auto* end = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(value.data(), end, v);
  if (ec != std::errc() || ptr != end) bad_value(key, value, "expected a nonnegative integer");
  return v;
}

void set_source_kind(GridSource& s, GridSource::Kind kind, const std::string& key) {
  if (s.kind != GridSource::Kind::none && s.kind != kind) {
    throw Error(ErrorCode::ConfigParse, key + ": more than one source given");
  }
  s.kind = kind;
}

using Setter = std::function<void(RunConfig&, const std::string&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = [] {
    std::map<std::string, Setter> t;
    t["command"] = [](RunConfig& c, auto&, auto& v) {
      c.command = parse_command(v);
      c.command_set = true;
    };
    t["dim"] = [](RunConfig& c, auto& k, auto& v) {
      c.dim = static_cast<int>(to_unsigned(k, v));
      if (c.dim != 1) bad_value(k, v, "only dim = 1 is supported");
    };
    t["n_cells"] = [](RunConfig& c, auto& k, auto& v) {
      c.n_cells = to_unsigned(k, v);
      if (c.n_cells < 2) bad_value(k, v, "need at least 2 cells");
    };
    t["dirichlet"] = [](RunConfig& c, auto& k, auto& v) {
      try {
        c.dirichlet = fem::parse_dirichlet(v);
      } catch (const Error&) {
        bad_value(k, v, "expected both-ends, left-only, right-only or none");
      }
    };
    t["length"] = [](RunConfig& c, auto& k, auto& v) { c.length = to_positive(k, v); };
    t["eps"] = [](RunConfig& c, auto&, auto& v) { c.eps = io::parse_number_list(v); };
    t["eps_lower"] = [](RunConfig& c, auto& k, auto& v) { c.eps_lower = to_positive(k, v); };
    t["eps_upper"] = [](RunConfig& c, auto& k, auto& v) { c.eps_upper = to_positive(k, v); };
    t["m"] = [](RunConfig& c, auto&, auto& v) { c.m = io::parse_number_list(v); };
    t["m_lower"] = [](RunConfig& c, auto& k, auto& v) { c.m_lower = to_positive(k, v); };
    t["m_upper"] = [](RunConfig& c, auto& k, auto& v) { c.m_upper = to_positive(k, v); };
    t["distribution"] = [](RunConfig& c, auto& k, auto& v) {
      if (v != "boltzmann" && v != "fermi_dirac" && v != "fermi-dirac") {
        bad_value(k, v, "expected boltzmann or fermi_dirac");
      }
      c.distribution = v;
    };
    t["N"] = [](RunConfig& c, auto& k, auto& v) { c.N = to_positive(k, v); };
    for (const char* name : {"V0", "q"}) {
      const std::string base = name;
      auto source = [base](RunConfig& c) -> GridSource& { return base == "V0" ? c.v0 : c.q; };
      t[base] = [source](RunConfig& c, auto& k, auto& v) {
        set_source_kind(source(c), GridSource::Kind::inline_values, k);
        source(c).values = io::parse_number_list(v);
      };
      t[base + "_file"] = [source](RunConfig& c, auto& k, auto& v) {
        set_source_kind(source(c), GridSource::Kind::file, k);
        source(c).path = v;
      };
      t[base + "_profile"] = [source, base](RunConfig& c, auto& k, auto& v) {
        static const std::set<std::string> known{"zero", "constant", "sine", "cosine", "gaussian"};
        if (!known.count(v) && !(base == "q" && v == "constructed")) bad_value(k, v, "unknown profile");
        set_source_kind(source(c), GridSource::Kind::profile, k);
        source(c).profile = v;
      };
      t[base + "_amplitude"] = [source](RunConfig& c, auto& k, auto& v) { source(c).amplitude = to_double(k, v); };
    }
    t["tol"] = [](RunConfig& c, auto& k, auto& v) { c.tol = to_positive(k, v); };
    t["fermi_tol"] = [](RunConfig& c, auto& k, auto& v) { c.fermi_tol = to_positive(k, v); };
    t["seed"] = [](RunConfig& c, auto& k, auto& v) { c.seed = to_unsigned(k, v); };
    t["cases"] = [](RunConfig& c, auto& k, auto& v) { c.cases = to_unsigned(k, v); };
    t["resolvent_cases"] = [](RunConfig& c, auto& k, auto& v) { c.resolvent_cases = to_unsigned(k, v); };
    t["saturation_cases"] = [](RunConfig& c, auto& k, auto& v) { c.saturation_cases = to_unsigned(k, v); };
    t["n_max"] = [](RunConfig& c, auto& k, auto& v) {
      c.n_max = to_unsigned(k, v);
      if (c.n_max < 1) bad_value(k, v, "must be at least 1");
    };
    t["bs_tolerance"] = [](RunConfig& c, auto& k, auto& v) { c.bs_tolerance = to_positive(k, v); };
    t["rho"] = [](RunConfig& c, auto& k, auto& v) { c.rho = to_double(k, v); };
    t["lambda"] = [](RunConfig& c, auto& k, auto& v) { c.lambda = to_double(k, v); };
    t["R"] = [](RunConfig& c, auto& k, auto& v) { c.R = to_positive(k, v); };
    t["probes"] = [](RunConfig& c, auto& k, auto& v) { c.probes = to_unsigned(k, v); };
    t["probe_cases"] = [](RunConfig& c, auto& k, auto& v) { c.probe_cases = to_unsigned(k, v); };
    t["out"] = [](RunConfig& c, auto&, auto& v) { c.out = v; };
    return t;
  }();
  return table;
}

void check_coefficients(const std::vector<double>& values, std::size_t n_cells, const char* key) {
  if (values.size() != 1 && values.size() != n_cells) {
    throw Error(ErrorCode::CountMismatch, std::string(key) + " has " + std::to_string(values.size()) +
                                              " values for " + std::to_string(n_cells) + " cells");
  }
  for (double v : values) {
    if (!(v > 0.0)) throw Error(ErrorCode::ConfigParse, std::string(key) + " values must be positive");
  }
}

}  // namespace

RunConfig parse_config(std::string_view text) {
  RunConfig cfg;
  std::set<std::string> seen;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string body = trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    const std::string where = "line " + std::to_string(line_no) + ": ";
    if (eq == std::string::npos) throw Error(ErrorCode::ConfigParse, where + "expected key = value");
    const std::string key = trim(std::string_view(body).substr(0, eq));
    const std::string value = trim(std::string_view(body).substr(eq + 1));
    if (key.empty() || value.empty()) throw Error(ErrorCode::ConfigParse, where + "empty key or value");
    if (!seen.insert(key).second) throw Error(ErrorCode::ConfigParse, where + "duplicate key '" + key + "'");
    const auto it = setters().find(key);
    if (it == setters().end()) throw Error(ErrorCode::ConfigParse, where + "unknown key '" + key + "'");
    try {
      it->second(cfg, key, value);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::NonFiniteValue) throw Error(ErrorCode::ConfigParse, where + e.what());
      throw;
    }
  }
  check_coefficients(cfg.eps, cfg.n_cells, "eps");
  check_coefficients(cfg.m, cfg.n_cells, "m");
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::MissingFile, "cannot open config " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  RunConfig cfg = parse_config(buf.str());
  // Data files are located relative to the config file.
  for (GridSource* s : {&cfg.v0, &cfg.q}) {
    if (s->kind == GridSource::Kind::file && s->path.is_relative()) s->path = path.parent_path() / s->path;
  }
  return cfg;
}

fem::GridFunction load_grid_function(const GridSource& source, const fem::AssembledSpace& space) {
  const std::size_t n = space.n_free();
  std::vector<double> values;
  switch (source.kind) {
    case GridSource::Kind::none:
      values.assign(n, 0.0);
      break;
    case GridSource::Kind::inline_values:
      values = source.values;
      break;
    case GridSource::Kind::file:
      values = io::read_value_column(source.path);
      break;
    case GridSource::Kind::profile: {
      const auto x = space.domain().free_coordinates();
      const double len = space.domain().length;
      const double a = source.amplitude;
      values.resize(n);
      for (std::size_t i = 0; i < n; ++i) {
        const double s = x[i] / len;
        if (source.profile == "zero") values[i] = 0.0;
        else if (source.profile == "constant") values[i] = a;
        else if (source.profile == "sine") values[i] = a * std::sin(M_PI * s);
        else if (source.profile == "cosine") values[i] = a * std::cos(M_PI * s);
        else if (source.profile == "gaussian") values[i] = a * std::exp(-std::pow((s - 0.5) / 0.1, 2));
        else throw Error(ErrorCode::ConfigParse, "profile '" + source.profile + "' is not a grid function");
      }
      break;
    }
  }
  if (values.size() != n) {
    throw Error(ErrorCode::CountMismatch,
                std::to_string(values.size()) + " values for " + std::to_string(n) + " free nodes");
  }
  for (double v : values) {
    if (!std::isfinite(v)) throw Error(ErrorCode::NonFiniteValue, "grid function value is not finite");
  }
  return {std::move(values)};
}

void write_grid_function(const std::filesystem::path& path, const fem::AssembledSpace& space,
                         const fem::GridFunction& u) {
  io::write_csv(path, {"x_i", "value"}, {space.domain().free_coordinates(), u.values});
}

int exit_code_for(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::ConfigParse:
    case ErrorCode::MissingFile:
    case ErrorCode::CountMismatch:
    case ErrorCode::ShapeMismatch:
    case ErrorCode::InvalidArgument:
    case ErrorCode::NoPoincare:
      return 2;
    case ErrorCode::InvariantViolation:
    case ErrorCode::BoundViolated:
      return 4;
    default:
      return 3;
  }
}

}  // namespace specfun::cli
