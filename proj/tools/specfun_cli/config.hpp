#pragma once

// Run configuration for the specfun-sp tool. The file format is flat
// `key = value` lines; `#` starts a comment; unknown keys are rejected.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "specfun/assembly.hpp"
#include "specfun/error.hpp"

namespace specfun::cli {

enum class Command { verify_bs, spectrum, fermi, density, solve_sp, probe_constants };

Command parse_command(std::string_view text);
std::string_view to_string(Command c) noexcept;

// Where a nodal vector comes from: inline values, a CSV file (last column),
// or a named profile scaled by an amplitude.
struct GridSource {
  enum class Kind { none, inline_values, file, profile };
  Kind kind = Kind::none;
  std::vector<double> values;
  std::filesystem::path path;
  std::string profile;
  double amplitude = 1.0;
};

struct RunConfig {
  Command command = Command::solve_sp;
  bool command_set = false;

  int dim = 1;
  std::size_t n_cells = 32;
  fem::DirichletSpec dirichlet = fem::DirichletSpec::both_ends;
  double length = 1.0;

  std::vector<double> eps{1.0};  // one value (constant) or one per element
  double eps_lower = 0.0;        // 0: use the minimum of the values
  double eps_upper = 0.0;
  std::vector<double> m{1.0};
  double m_lower = 0.0;
  double m_upper = 0.0;

  std::string distribution = "boltzmann";
  double N = 1.0;
  GridSource v0;
  GridSource q;

  double tol = 1e-10;
  double fermi_tol = 0.0;  // 0: 1e−10·N
  std::uint64_t seed = 7;

  std::size_t cases = 1000;
  std::size_t resolvent_cases = 300;
  std::size_t saturation_cases = 100;
  std::size_t n_max = 30;
  double bs_tolerance = 1e-9;
  double rho = 0.0;
  double lambda = 1.0;

  double R = 0.0;  // 0: ‖V₀‖ (at least 1)
  std::size_t probes = 12;
  std::size_t probe_cases = 20;

  std::filesystem::path out = ".";
};

// Throws ConfigParse (syntax, unknown key, bad value) or CountMismatch.
RunConfig parse_config(std::string_view text);
// Throws MissingFile in addition.
RunConfig load_config(const std::filesystem::path& path);

// Values for the free nodes. Throws CountMismatch, NonFiniteValue,
// MissingFile or ConfigParse. Profiles: zero, constant, sine, cosine, gaussian.
fem::GridFunction load_grid_function(const GridSource& source, const fem::AssembledSpace& space);
// Writes columns x_i, value so that load_grid_function reads it back exactly.
void write_grid_function(const std::filesystem::path& path, const fem::AssembledSpace& space,
                         const fem::GridFunction& u);

// 2 configuration, 3 numeric failure, 4 invariant violation.
int exit_code_for(ErrorCode code) noexcept;

struct RunOutcome {
  int exit_code = 0;
  std::map<std::string, std::string> files;  // name → content, written under cfg.out
  std::string summary;
};

// Validates the configuration completely, runs the command and writes its
// files. Nothing is written when validation or the computation throws.
RunOutcome run(const RunConfig& cfg);

}  // namespace specfun::cli
