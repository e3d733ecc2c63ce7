#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "specfun_cli/config.hpp"

int main(int argc, char** argv) {
  using namespace specfun;
  CLI::App app{"Schrödinger–Poisson and spectral-inequality checks"};
  std::string command;
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out_dir;
  bool quiet = false;
  app.add_option("command", command,
                 "verify-bs | spectrum | fermi | density | solve-sp | probe-constants (else taken from the config)");
  app.add_option("--config", config_path, "configuration file")->required();
  app.add_option("--seed", seed, "overrides the seed of the config");
  app.add_option("--out", out_dir, "output directory (overrides the config)");
  app.add_flag("--quiet", quiet, "print nothing on success");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    cli::RunConfig cfg = cli::load_config(config_path);
    if (!command.empty()) {
      const auto c = cli::parse_command(command);
      if (cfg.command_set && c != cfg.command) {
        throw Error(ErrorCode::ConfigParse, "command differs from the one in the config");
      }
      cfg.command = c;
    } else if (!cfg.command_set) {
      throw Error(ErrorCode::ConfigParse, "no command given");
    }
    if (seed) cfg.seed = *seed;
    if (!out_dir.empty()) cfg.out = out_dir;
    const auto outcome = cli::run(cfg);
    if (!quiet || outcome.exit_code != 0) std::cout << outcome.summary << "\n";
    return outcome.exit_code;
  } catch (const Error& e) {
    std::cerr << "specfun-sp: " << e.what() << "\n";
    return cli::exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "specfun-sp: " << e.what() << "\n";
    return 3;
  }
}
