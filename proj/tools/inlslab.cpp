// inlslab: ground states, threshold classification and evolution for the
// inhomogeneous NLS from flat key = value configs.
#include <cstdint>
#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "inls/config.hpp"
#include "inls/run.hpp"

int main(int argc, char** argv) {
  CLI::App app{"inlslab: numerical lab for the inhomogeneous NLS"};
  app.require_subcommand(1);

  struct Sub {
    inls::Mode mode;
    const char* name;
    const char* help;
  };
  const Sub subs[] = {
      {inls::Mode::GroundState, "groundstate", "solve for the ground state; writes profile.csv and report.json"},
      {inls::Mode::Classify, "classify", "compare initial data with the ground-state threshold; writes report.json"},
      {inls::Mode::Evolve, "evolve", "split-step evolution; writes trajectory.csv and report.json"},
      {inls::Mode::Verify, "verify", "run the property suites; writes verify.json"},
      {inls::Mode::Sweep, "sweep", "classify a list of cases; writes sweep.json"},
  };

  std::string config_path;
  std::optional<std::uint64_t> seed;
  for (const auto& s : subs) {
    auto* cmd = app.add_subcommand(s.name, s.help);
    cmd->add_option("--config", config_path, "configuration file")->required()->check(CLI::ExistingFile);
    if (s.mode == inls::Mode::Verify) cmd->add_option("--seed", seed, "seed for the randomized suites");
  }

  CLI11_PARSE(app, argc, argv);

  inls::Mode mode = inls::Mode::GroundState;
  for (const auto& s : subs) {
    if (app.got_subcommand(s.name)) mode = s.mode;
  }

  try {
    auto cfg = inls::load_config(config_path, mode);
    if (seed) cfg.seed = *seed;
    return inls::run(cfg, std::cerr);
  } catch (const inls::Error& e) {
    std::cout << inls::error_json(e.kind(), e.what()) << std::endl;
    return 2;
  } catch (const std::exception& e) {
    std::cout << inls::error_json("InternalError", e.what()) << std::endl;
    return 2;
  }
}
