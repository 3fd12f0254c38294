#include "twraoi/scenario.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <stdexcept>

namespace twraoi {

namespace {

using nlohmann::json;

[[noreturn]] void config_error(const std::string& msg) {
  throw std::invalid_argument("scenario: " + msg);
}

void expect_keys(const json& obj, const std::set<std::string>& allowed,
                 const char* context) {
  for (const auto& item : obj.items()) {
    if (!allowed.count(item.key())) {
      config_error(std::string("unknown key \"") + item.key() + "\" in " +
                   context);
    }
  }
}

double get_number(const json& obj, const char* key, double fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_number()) config_error(std::string(key) + " must be a number");
  return obj[key].get<double>();
}

std::uint64_t get_uint(const json& obj, const char* key,
                       std::uint64_t fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_number_unsigned() && !obj[key].is_number_integer()) {
    config_error(std::string(key) + " must be a nonnegative integer");
  }
  const auto v = obj[key].get<std::int64_t>();
  if (v < 0) config_error(std::string(key) + " must be nonnegative");
  return static_cast<std::uint64_t>(v);
}

std::string get_string(const json& obj, const char* key,
                       const std::string& fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_string()) config_error(std::string(key) + " must be a string");
  return obj[key].get<std::string>();
}

std::optional<double> get_opt_number(const json& obj, const char* key) {
  if (!obj.contains(key)) return std::nullopt;
  if (!obj[key].is_number()) config_error(std::string(key) + " must be a number");
  return obj[key].get<double>();
}

void parse_params(const json& obj, SystemParams& p) {
  expect_keys(obj,
              {"sigma2_a", "sigma2_b", "sigma2_r", "gamma_th", "gamma_th_db",
               "weight_a", "weight_b", "peak_a", "peak_b", "peak_r"},
              "params");
  p.sigma2_a = get_number(obj, "sigma2_a", p.sigma2_a);
  p.sigma2_b = get_number(obj, "sigma2_b", p.sigma2_b);
  p.sigma2_r = get_number(obj, "sigma2_r", p.sigma2_r);
  p.weight_a = get_number(obj, "weight_a", p.weight_a);
  p.weight_b = get_number(obj, "weight_b", p.weight_b);
  p.peak_a = get_number(obj, "peak_a", p.peak_a);
  p.peak_b = get_number(obj, "peak_b", p.peak_b);
  p.peak_r = get_number(obj, "peak_r", p.peak_r);
  if (obj.contains("gamma_th") && obj.contains("gamma_th_db")) {
    config_error("give gamma_th or gamma_th_db, not both");
  }
  if (obj.contains("gamma_th")) {
    p.gamma_th = get_number(obj, "gamma_th", p.gamma_th);
  } else if (obj.contains("gamma_th_db")) {
    p.gamma_th = db_to_linear(get_number(obj, "gamma_th_db", 0.0));
  }
}

void parse_powers(const json& obj, PowerProfile& powers) {
  expect_keys(obj, {"p_a", "p_b", "p_r"}, "powers");
  powers.p_a = get_number(obj, "p_a", powers.p_a);
  powers.p_b = get_number(obj, "p_b", powers.p_b);
  powers.p_r = get_number(obj, "p_r", powers.p_r);
}

void parse_sweep(const json& obj, SweepSpec& sweep) {
  expect_keys(obj, {"vary", "fixed_power", "p_r", "start", "stop", "step"},
              "sweep");
  sweep.vary = get_string(obj, "vary", sweep.vary);
  sweep.fixed_power = get_number(obj, "fixed_power", sweep.fixed_power);
  sweep.p_r = get_opt_number(obj, "p_r");
  sweep.start = get_number(obj, "start", sweep.start);
  sweep.stop = get_number(obj, "stop", sweep.stop);
  sweep.step = get_number(obj, "step", sweep.step);
}

void parse_grid(const json& obj, GridSpec& grid) {
  expect_keys(obj,
              {"step", "min_success", "start_a", "stop_a", "start_b",
               "stop_b"},
              "grid");
  grid.step = get_number(obj, "step", grid.step);
  grid.min_success = get_number(obj, "min_success", grid.min_success);
  grid.start_a = get_opt_number(obj, "start_a");
  grid.stop_a = get_opt_number(obj, "stop_a");
  grid.start_b = get_opt_number(obj, "start_b");
  grid.stop_b = get_opt_number(obj, "stop_b");
}

void parse_sim(const json& obj, SimSettings& sim) {
  expect_keys(obj, {"n_slots", "n_samples", "seed"}, "sim");
  sim.n_slots = get_uint(obj, "n_slots", sim.n_slots);
  sim.n_samples = get_uint(obj, "n_samples", sim.n_samples);
  sim.seed = get_uint(obj, "seed", sim.seed);
}

void parse_output(const json& obj, OutputSpec& output) {
  expect_keys(obj, {"path", "format"}, "output");
  output.path = get_string(obj, "path", output.path);
  output.format = get_string(obj, "format", output.format);
}

void validate_sweep(const SweepSpec& s) {
  if (s.vary != "p_a" && s.vary != "p_b") {
    config_error("sweep.vary must be \"p_a\" or \"p_b\"");
  }
  if (!(s.step > 0.0)) config_error("sweep.step must be positive");
  if (!(s.start < s.stop)) config_error("sweep.start must be below sweep.stop");
  if (!(s.start > 0.0)) config_error("sweep.start must be positive");
  if (!(s.fixed_power > 0.0)) config_error("sweep.fixed_power must be positive");
  if (s.p_r && !(*s.p_r > 0.0)) config_error("sweep.p_r must be positive");
}

void validate_grid(const GridSpec& g, const SystemParams& params) {
  if (!(g.step > 0.0)) config_error("grid.step must be positive");
  if (g.min_success < 0.0 || g.min_success >= 1.0) {
    config_error("grid.min_success must lie in [0,1)");
  }
  const double start_a = g.start_a.value_or(g.step);
  const double stop_a = g.stop_a.value_or(params.peak_a);
  const double start_b = g.start_b.value_or(g.step);
  const double stop_b = g.stop_b.value_or(params.peak_b);
  if (!(start_a > 0.0) || !(start_b > 0.0)) {
    config_error("grid range starts must be positive");
  }
  if (!(start_a <= stop_a) || !(start_b <= stop_b)) {
    config_error("grid range start must not exceed stop");
  }
}

}  // namespace

const char* to_string(Command c) {
  switch (c) {
    case Command::analyze: return "analyze";
    case Command::optimize: return "optimize";
    case Command::simulate: return "simulate";
    case Command::sweep: return "sweep";
    case Command::grid: return "grid";
  }
  return "unknown";
}

Scenario default_scenario() {
  Scenario s;
  s.params.sigma2_a = 0.001;
  s.params.sigma2_b = 0.001;
  s.params.sigma2_r = 0.001;
  s.params.gamma_th = 100.0;  // 20 dB
  s.params.weight_a = 0.5;
  s.params.weight_b = 0.5;
  s.params.peak_a = 1.0;
  s.params.peak_b = 2.0;
  s.params.peak_r = 0.75;
  return s;
}

void apply_quick_ci(Scenario& s) {
  s.sim.n_slots = 100'000;
  s.sim.n_samples = 100'000;
}

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

Scenario load_scenario(const nlohmann::json& j) {
  if (!j.is_object()) config_error("document root must be an object");
  expect_keys(j,
              {"params", "powers", "sweep", "grid", "sim", "output",
               "min_success", "oracle_step"},
              "scenario");
  Scenario s = default_scenario();
  if (j.contains("params")) parse_params(j["params"], s.params);
  if (j.contains("powers")) {
    PowerProfile powers;
    parse_powers(j["powers"], powers);
    s.powers = powers;
  }
  if (j.contains("sweep")) {
    SweepSpec sweep;
    parse_sweep(j["sweep"], sweep);
    s.sweep = sweep;
  }
  if (j.contains("grid")) {
    GridSpec grid;
    parse_grid(j["grid"], grid);
    s.grid = grid;
  }
  if (j.contains("sim")) parse_sim(j["sim"], s.sim);
  if (j.contains("output")) parse_output(j["output"], s.output);
  s.min_success = get_number(j, "min_success", s.min_success);
  s.oracle_step = get_opt_number(j, "oracle_step");
  return s;
}

Scenario load_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) config_error("cannot open config file " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    config_error(std::string("invalid JSON in ") + path + ": " + e.what());
  }
  return load_scenario(j);
}

void apply_overrides(Scenario& s, const ScenarioOverrides& o) {
  if (o.seed) s.sim.seed = *o.seed;
  if (o.n_slots) s.sim.n_slots = *o.n_slots;
  if (o.n_samples) s.sim.n_samples = *o.n_samples;
  if (o.gamma_th_db) s.params.gamma_th = db_to_linear(*o.gamma_th_db);
  if (o.min_success) s.min_success = *o.min_success;
  if (o.oracle_step) s.oracle_step = *o.oracle_step;
  if (o.out_path) s.output.path = *o.out_path;
  if (o.format) s.output.format = *o.format;
}

void prepare_for(Command command, Scenario& s) {
  s.params.validate();
  if (s.output.format != "csv" && s.output.format != "json") {
    config_error("output.format must be \"csv\" or \"json\"");
  }
  if (s.min_success < 0.0 || s.min_success >= 1.0) {
    config_error("min_success must lie in [0,1)");
  }
  if (s.oracle_step && !(*s.oracle_step > 0.0)) {
    config_error("oracle_step must be positive");
  }

  const int sections = (s.powers ? 1 : 0) + (s.sweep ? 1 : 0) +
                       (s.grid ? 1 : 0);
  if (sections > 1) {
    config_error(
        "at most one of powers / sweep / grid may be specified per run");
  }

  switch (command) {
    case Command::analyze:
    case Command::simulate:
      if (s.sweep || s.grid) {
        config_error(std::string(to_string(command)) +
                     " needs fixed powers, not a sweep or grid section");
      }
      if (!s.powers) s.powers = PowerProfile{1.0, 1.196, 0.75};
      s.powers->validate();
      break;
    case Command::sweep:
      if (s.powers || s.grid) {
        config_error("sweep needs a sweep section, not powers or grid");
      }
      if (!s.sweep) s.sweep = SweepSpec{};
      validate_sweep(*s.sweep);
      break;
    case Command::grid:
      if (s.powers || s.sweep) {
        config_error("grid needs a grid section, not powers or sweep");
      }
      if (!s.grid) s.grid = GridSpec{};
      validate_grid(*s.grid, s.params);
      break;
    case Command::optimize:
      // Operates on the peaks alone; any data section is ignored.
      break;
  }
  if (command == Command::simulate &&
      (s.sim.n_slots < 2 || s.sim.n_slots % 2 != 0)) {
    config_error("sim.n_slots must be even and at least 2");
  }
  if (s.sim.n_samples == 0) config_error("sim.n_samples must be at least 1");
}

nlohmann::ordered_json scenario_to_json(const Scenario& s) {
  nlohmann::ordered_json j;
  j["params"] = {{"sigma2_a", s.params.sigma2_a},
                 {"sigma2_b", s.params.sigma2_b},
                 {"sigma2_r", s.params.sigma2_r},
                 {"gamma_th", s.params.gamma_th},
                 {"weight_a", s.params.weight_a},
                 {"weight_b", s.params.weight_b},
                 {"peak_a", s.params.peak_a},
                 {"peak_b", s.params.peak_b},
                 {"peak_r", s.params.peak_r}};
  if (s.powers) {
    j["powers"] = {{"p_a", s.powers->p_a},
                   {"p_b", s.powers->p_b},
                   {"p_r", s.powers->p_r}};
  }
  if (s.sweep) {
    nlohmann::ordered_json sweep = {{"vary", s.sweep->vary},
                                    {"fixed_power", s.sweep->fixed_power},
                                    {"start", s.sweep->start},
                                    {"stop", s.sweep->stop},
                                    {"step", s.sweep->step}};
    if (s.sweep->p_r) sweep["p_r"] = *s.sweep->p_r;
    j["sweep"] = sweep;
  }
  if (s.grid) {
    nlohmann::ordered_json grid = {{"step", s.grid->step},
                                   {"min_success", s.grid->min_success}};
    if (s.grid->start_a) grid["start_a"] = *s.grid->start_a;
    if (s.grid->stop_a) grid["stop_a"] = *s.grid->stop_a;
    if (s.grid->start_b) grid["start_b"] = *s.grid->start_b;
    if (s.grid->stop_b) grid["stop_b"] = *s.grid->stop_b;
    j["grid"] = grid;
  }
  j["sim"] = {{"n_slots", s.sim.n_slots},
              {"n_samples", s.sim.n_samples},
              {"seed", s.sim.seed}};
  j["output"] = {{"path", s.output.path}, {"format", s.output.format}};
  j["min_success"] = s.min_success;
  if (s.oracle_step) j["oracle_step"] = *s.oracle_step;
  return j;
}

std::string resolve_output_path(const Scenario& s, Command command) {
  std::filesystem::path path = s.output.path.empty()
                                   ? std::filesystem::path(
                                         std::string(to_string(command)) +
                                         "." + s.output.format)
                                   : std::filesystem::path(s.output.path);
  if (path.is_relative()) {
    if (const char* dir = std::getenv("TWRAOI_OUT_DIR"); dir && *dir) {
      path = std::filesystem::path(dir) / path;
    }
  }
  return path.string();
}

}  // namespace twraoi
