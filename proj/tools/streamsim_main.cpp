#include <algorithm>
#include <cstdint>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "streamsim/runner.hpp"

namespace {

struct CliFlags {
  std::uint64_t seed = 0;
  double horizon = 0.0;
  int batches = 0;
  std::string out_dir = ".";
  std::string estimation;
  bool trace = false;
  bool preemptive = false;
  bool plot = false;

  CLI::Option* seed_opt = nullptr;
  CLI::Option* horizon_opt = nullptr;
  CLI::Option* batches_opt = nullptr;
};

void add_run_flags(CLI::App* cmd, CliFlags& f) {
  f.seed_opt = cmd->add_option("--seed", f.seed, "Base RNG seed");
  f.horizon_opt =
      cmd->add_option("--horizon", f.horizon, "Simulated time per run")
          ->check(CLI::PositiveNumber);
  f.batches_opt = cmd->add_option("--batches", f.batches,
                                  "Batches for the confidence interval")
                      ->check(CLI::PositiveNumber);
  cmd->add_option("--out", f.out_dir, "Output directory")
      ->capture_default_str();
  cmd->add_flag("--trace", f.trace, "Write a full event dump");
  cmd->add_option("--estimation", f.estimation,
                  "Demand estimation mode: oracle or measured")
      ->check(CLI::IsMember({"oracle", "measured"}));
  cmd->add_flag("--preemptive", f.preemptive,
                "Migrate running jobs on reallocation");
  cmd->add_flag("--plot", f.plot, "Emit a matplotlib script next to the CSV");
}

streamsim::RunOverrides to_overrides(const CliFlags& f) {
  streamsim::RunOverrides ov;
  if (f.seed_opt && f.seed_opt->count()) ov.seed = f.seed;
  if (f.horizon_opt && f.horizon_opt->count()) ov.horizon = f.horizon;
  if (f.batches_opt && f.batches_opt->count()) ov.batches = f.batches;
  if (f.estimation == "oracle")
    ov.estimation = streamsim::EstimationMode::oracle;
  else if (f.estimation == "measured")
    ov.estimation = streamsim::EstimationMode::measured;
  if (f.preemptive) ov.preemptive = true;
  ov.out_dir = f.out_dir;
  ov.trace = f.trace;
  ov.plot = f.plot;
  return ov;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Discrete-event simulator for revenue-driven stream admission and "
      "server allocation in a shared cluster"};
  app.require_subcommand(1);

  std::string run_config;
  CliFlags run_flags;
  CLI::App* run_cmd = app.add_subcommand("run", "Run a scenario file");
  run_cmd->add_option("config", run_config, "Scenario JSON file")->required();
  add_run_flags(run_cmd, run_flags);

  std::string preset_name;
  CliFlags preset_flags;
  CLI::App* preset_cmd =
      app.add_subcommand("preset", "Run a shipped experiment preset");
  preset_cmd
      ->add_option("name", preset_name, "Preset name: fig2, fig3, fig4, fig5")
      ->required();
  add_run_flags(preset_cmd, preset_flags);

  std::string validate_config;
  CLI::App* validate_cmd =
      app.add_subcommand("validate", "Check a scenario file and exit");
  validate_cmd->add_option("config", validate_config, "Scenario JSON file")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  if (run_cmd->parsed())
    return streamsim::run_scenario_file(run_config, to_overrides(run_flags),
                                        std::cout, std::cerr);

  if (preset_cmd->parsed()) {
    std::vector<std::string> paths;
    try {
      paths = streamsim::preset_files(preset_name);
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << '\n';
      return 1;
    }
    int rc = 0;
    for (const std::string& path : paths)
      rc = std::max(rc, streamsim::run_scenario_file(
                            path, to_overrides(preset_flags), std::cout,
                            std::cerr));
    return rc;
  }

  return streamsim::validate_scenario_file(validate_config, std::cout,
                                           std::cerr);
}
