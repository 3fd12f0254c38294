#ifndef TWRAOI_SCENARIO_HPP_
#define TWRAOI_SCENARIO_HPP_

#include <cstdint>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "twraoi/model.hpp"

// Scenario files describe one experiment: the system parameters, exactly one
// data section (fixed powers, a 1-D sweep, or a 2-D grid) for the commands
// that need one, Monte Carlo / simulation settings, and the output sink.
// CLI flags override file values; file values override the built-in paper
// defaults.

namespace twraoi {

enum class Command { analyze, optimize, simulate, sweep, grid };

const char* to_string(Command c);

struct SweepSpec {
  std::string vary = "p_b";        // "p_a" or "p_b"
  double fixed_power = 1.0;        // the non-swept source power
  std::optional<double> p_r;       // defaults to params.peak_r
  double start = 0.75;
  double stop = 2.0;
  double step = 0.025;
};

struct GridSpec {
  double step = 0.01;
  double min_success = 0.5;        // feasibility filter on both links
  std::optional<double> start_a, stop_a;  // default (step, peak_a)
  std::optional<double> start_b, stop_b;
};

struct SimSettings {
  std::uint64_t n_slots = 10'000'000;
  std::uint64_t n_samples = 10'000'000;
  std::uint64_t seed = 1;
};

struct OutputSpec {
  std::string path;                // empty -> "<command>.<format>"
  std::string format = "csv";     // "csv" or "json"
};

struct Scenario {
  SystemParams params;
  std::optional<PowerProfile> powers;
  std::optional<SweepSpec> sweep;
  std::optional<GridSpec> grid;
  SimSettings sim;
  OutputSpec output;
  double min_success = 0.0;        // optimizer constraint
  std::optional<double> oracle_step;
};

// Baseline scenario: equal 0.001 noise variances, 20 dB threshold, equal
// weights, peaks (1, 2, 0.75), 10^7 slots and samples.
Scenario default_scenario();

// Shrinks the Monte Carlo budgets to 10^5 so every command finishes in
// seconds.
void apply_quick_ci(Scenario& s);

// Power-ratio dB to linear: 10^(db/10).
double db_to_linear(double db);

// Parses a scenario document on top of the defaults. Unknown keys, a
// gamma_th/gamma_th_db clash, or malformed sections raise
// std::invalid_argument.
Scenario load_scenario(const nlohmann::json& j);
Scenario load_scenario_file(const std::string& path);

struct ScenarioOverrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> n_slots;
  std::optional<std::uint64_t> n_samples;
  std::optional<double> gamma_th_db;
  std::optional<double> min_success;
  std::optional<double> oracle_step;
  std::optional<std::string> out_path;
  std::optional<std::string> format;
};

void apply_overrides(Scenario& s, const ScenarioOverrides& o);

// Fills the command's default data section when none is present, rejects
// scenarios carrying more than one data section or the wrong one, and
// validates every engaged field. Throws std::invalid_argument on violation.
void prepare_for(Command command, Scenario& s);

// Fully resolved scenario, for --print-config.
nlohmann::ordered_json scenario_to_json(const Scenario& s);

// Output file target: explicit path if set, else "<command>.<format>".
// Relative paths resolve under $TWRAOI_OUT_DIR when that variable is set.
std::string resolve_output_path(const Scenario& s, Command command);

}  // namespace twraoi

#endif  // TWRAOI_SCENARIO_HPP_
