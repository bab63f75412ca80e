// fogloss <config-path> [--wide] [--out PATH]
//   exit 0 on success, 2 on a configuration error, 3 when an engine fails.
#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "fogloss/config.hpp"
#include "fogloss/error.hpp"
#include "fogloss/sweep.hpp"

namespace {

constexpr int kConfigError = 2;
constexpr int kEngineError = 3;

bool is_config_error(fogloss::ErrorCode code) {
  return code == fogloss::ErrorCode::ParseError || code == fogloss::ErrorCode::ValidationError;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace fogloss;

  CLI::App app{"Asymptotic blocking probabilities of two cooperating loss systems"};
  std::string config_path;
  std::string out_path;
  std::string preset;
  bool wide = false;
  app.add_option("config", config_path, "key = value configuration file");
  app.add_option("--out", out_path, "write the table here instead of standard output");
  app.add_option("--preset", preset, "run a figure grid instead of a config")
      ->check(CLI::IsMember({"fig2", "fig3", "fig4"}));
  app.add_flag("--wide", wide, "one column per curve");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kConfigError;
  }
  if (config_path.empty() == preset.empty()) {
    std::cerr << "fogloss: give either a config path or --preset\n";
    return kConfigError;
  }

  cli::RunConfig cfg;
  unsigned threads = 1;
  try {
    cfg = preset.empty() ? cli::load_config(config_path) : cli::figure_preset(preset);
    threads = cli::sweep_threads();
    if (wide && (cfg.mode == cli::Mode::ring || !cfg.sweep)) {
      throw Error(ErrorCode::ValidationError, "--wide: needs a sweep axis");
    }
  } catch (const Error& e) {
    std::cerr << "fogloss: " << e.what() << '\n';
    return kConfigError;
  }
  if (out_path.empty()) out_path = cfg.out;

  std::ostringstream table;
  try {
    if (cfg.mode == cli::Mode::ring) {
      cli::write_ring(cfg, table);
    } else {
      const cli::Table t = cli::run_sweep(cfg, threads);
      if (wide) {
        cli::write_wide(t, table);
      } else {
        cli::write_long(t, table);
      }
    }
  } catch (const Error& e) {
    std::cerr << "fogloss: " << e.what() << '\n';
    return is_config_error(e.code()) ? kConfigError : kEngineError;
  } catch (const std::exception& e) {
    std::cerr << "fogloss: " << e.what() << '\n';
    return kEngineError;
  }

  if (out_path.empty()) {
    std::cout << table.str();
    return 0;
  }
  std::ofstream out(out_path, std::ios::binary);
  out << table.str();
  if (!out.flush()) {
    std::cerr << "fogloss: cannot write " << out_path << '\n';
    return kConfigError;
  }
  return 0;
}
