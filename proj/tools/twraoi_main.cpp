// twraoi: analyze, optimize, and simulate the information freshness of a
// two-source amplify-and-forward relay status-update link.

#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "twraoi/commands.hpp"
#include "twraoi/optimizer.hpp"
#include "twraoi/scenario.hpp"

namespace {

struct CliState {
  std::optional<std::string> config;
  std::optional<std::string> preset;
  twraoi::ScenarioOverrides overrides;
  twraoi::RunOptions options;
};

void attach_common(CLI::App* cmd, CliState& state) {
  cmd->add_option("--config", state.config, "scenario JSON file");
  cmd->add_option("--preset", state.preset,
                  "named preset: paper (defaults) or quick-ci (1e5 slots and "
                  "samples)");
  cmd->add_option("--seed", state.overrides.seed, "RNG seed");
  cmd->add_option("--slots", state.overrides.n_slots,
                  "simulated slots (even)");
  cmd->add_option("--samples", state.overrides.n_samples,
                  "Monte Carlo channel draws");
  cmd->add_option("--gamma-th-db", state.overrides.gamma_th_db,
                  "SNR threshold in dB (overrides the scenario value)");
  cmd->add_option("--out", state.overrides.out_path, "output file path");
  cmd->add_option("--format", state.overrides.format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--threads", state.options.threads,
                  "worker threads (0 = hardware)");
  cmd->add_flag("--print-config", state.options.print_config,
                "echo the fully resolved scenario before running");
}

twraoi::Scenario build_scenario(const CliState& state) {
  twraoi::Scenario scenario = state.config
                                  ? twraoi::load_scenario_file(*state.config)
                                  : twraoi::default_scenario();
  if (state.preset) {
    if (*state.preset == "quick-ci") {
      twraoi::apply_quick_ci(scenario);
    } else if (*state.preset != "paper") {
      throw std::invalid_argument("unknown preset: " + *state.preset);
    }
  }
  twraoi::apply_overrides(scenario, state.overrides);
  return scenario;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Age-of-information toolkit for a two-way amplify-and-forward "
               "relay status-update system"};
  app.require_subcommand(1);

  CliState state;
  twraoi::Command selected = twraoi::Command::analyze;

  auto* analyze = app.add_subcommand(
      "analyze", "closed-form and Monte Carlo statistics at fixed powers");
  auto* optimize = app.add_subcommand(
      "optimize", "minimize the expected weighted-sum AoI under peak powers");
  auto* simulate = app.add_subcommand(
      "simulate", "slot-level simulation of the age process at fixed powers");
  auto* sweep = app.add_subcommand(
      "sweep", "1-D power sweep with analytic, Monte Carlo, and simulated AoI");
  auto* grid = app.add_subcommand(
      "grid", "2-D feasible-region map of the asymptotic weighted AoI");

  for (auto* cmd : {analyze, optimize, simulate, sweep, grid}) {
    attach_common(cmd, state);
  }
  optimize->add_option("--oracle", state.overrides.oracle_step,
                       "cross-check against the brute-force grid oracle at "
                       "this step");
  optimize->add_option("--min-success", state.overrides.min_success,
                       "require both success probabilities above this value");
  grid->add_option("--min-success", state.overrides.min_success,
                   "feasibility filter for grid rows (default 0.5)");

  analyze->callback([&] { selected = twraoi::Command::analyze; });
  optimize->callback([&] { selected = twraoi::Command::optimize; });
  simulate->callback([&] { selected = twraoi::Command::simulate; });
  sweep->callback([&] { selected = twraoi::Command::sweep; });
  grid->callback([&] { selected = twraoi::Command::grid; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;  // usage error
  }

  try {
    twraoi::Scenario scenario = build_scenario(state);
    // The grid command's own min-success default lives in its section; the
    // flag overrides it there as well.
    if (selected == twraoi::Command::grid && state.overrides.min_success) {
      if (!scenario.grid) scenario.grid = twraoi::GridSpec{};
      scenario.grid->min_success = *state.overrides.min_success;
    }
    return twraoi::run_command(selected, std::move(scenario), state.options);
  } catch (const twraoi::InfeasibleError& e) {
    std::cerr << "infeasible: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
