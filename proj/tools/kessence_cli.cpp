// kessence: command-line front end for the k-essence simulator.
//
//   kessence <eos-scan|wall|evolve|regimes> [--config FILE] [--preset NAME] [--out DIR] [--quiet]
//
// Exit codes: 0 success, 2 configuration error, 3 numeric failure, 4 I/O error.

#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "kessence/config.hpp"
#include "kessence/errors.hpp"
#include "kessence/scenario.hpp"

namespace {

enum ExitCode { kOk = 0, kConfig = 2, kNumeric = 3, kIo = 4 };

struct Options {
  std::string config_path;
  std::string preset;
  std::string out_dir;
  bool quiet = false;
};

int run(const std::string& command, const Options& opt) {
  using namespace kessence;
  RunConfig config = opt.config_path.empty() ? paper_point_config() : load_config(opt.config_path);
  if (!opt.preset.empty()) apply_preset(config, opt.preset);
  if (!opt.out_dir.empty()) config.output.dir = opt.out_dir;
  validate(config);

  CommandResult result;
  if (command == "eos-scan") {
    result = run_eos_scan(config);
  } else if (command == "wall") {
    result = run_wall(config);
  } else if (command == "evolve") {
    result = run_evolve(config);
  } else {
    result = run_regimes(config);
  }

  const auto written = write_outputs(config.output.dir, result);
  if (!opt.quiet) {
    for (const auto& p : written) std::cout << p.string() << "\n";
    std::cout << result.status << "\n";
  }
  if (!result.ok) {
    std::cerr << "kessence: " << result.status << "\n";
    return kNumeric;
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"k-essence equation-of-state, wall-profile and evolution scenarios"};
  app.require_subcommand(1);

  Options opt;
  std::string command;
  for (const char* name : {"eos-scan", "wall", "evolve", "regimes"}) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", opt.config_path, "JSON run configuration");
    sub->add_option("--preset", opt.preset, "figure1, figure2 or paper-point");
    sub->add_option("--out", opt.out_dir, "output directory (overrides output.dir)");
    sub->add_flag("--quiet", opt.quiet, "do not list written files");
    sub->callback([&command, name] { command = name; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }

  try {
    return run(command, opt);
  } catch (const kessence::ConfigError& e) {
    std::cerr << "kessence: configuration error: " << e.what() << "\n";
    return kConfig;
  } catch (const kessence::InvalidGrid& e) {
    std::cerr << "kessence: configuration error: " << e.what() << "\n";
    return kConfig;
  } catch (const kessence::NumericError& e) {
    std::cerr << "kessence: numeric failure: " << e.what() << "\n";
    return kNumeric;
  } catch (const kessence::IoError& e) {
    std::cerr << "kessence: I/O error: " << e.what() << "\n";
    return kIo;
  }
}
