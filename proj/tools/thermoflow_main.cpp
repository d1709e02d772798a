#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "thermoflow/config.hpp"
#include "thermoflow/run.hpp"

int main(int argc, char** argv) {
  using namespace thermoflow;
  CLI::App app{"Nonisothermal two-phase diffuse-interface simulator (Peng-Robinson)"};
  app.require_subcommand(1);

  CLI::App* run_cmd = app.add_subcommand("run", "run a scenario configuration");
  std::string config_path;
  std::string out_dir;
  long steps = -1;
  long snapshot_every = -1;
  std::string convection;
  run_cmd->add_option("config", config_path, "configuration file")->required();
  run_cmd->add_option("--out", out_dir, "output directory (overrides run.output_dir)");
  run_cmd->add_option("--steps", steps, "number of steps (overrides run.n_steps)")
      ->check(CLI::NonNegativeNumber);
  run_cmd->add_option("--snapshot-every", snapshot_every,
                      "snapshot interval, 0 = first and last only")
      ->check(CLI::NonNegativeNumber);
  run_cmd->add_option("--convection", convection, "momentum convection form")
      ->check(CLI::IsMember({"upwind", "skew"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfigError;
  }

  ScenarioConfig cfg;
  try {
    cfg = load_config(config_path);
    if (!out_dir.empty()) cfg.run.output_dir = out_dir;
    if (steps >= 0) cfg.run.n_steps = steps;
    if (snapshot_every >= 0) cfg.run.snapshot_every = snapshot_every;
    if (!convection.empty()) cfg.scheme.convection = parse_convection(convection);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfigError;
  }
  return run(cfg, std::cerr);
}
