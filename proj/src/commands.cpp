#include "twraoi/commands.hpp"

#include <cmath>
#include <iostream>
#include <optional>
#include <vector>

#include "twraoi/fading.hpp"
#include "twraoi/optimizer.hpp"
#include "twraoi/parallel.hpp"
#include "twraoi/report.hpp"
#include "twraoi/rng.hpp"
#include "twraoi/simulator.hpp"

namespace twraoi {

namespace {

using nlohmann::ordered_json;

void put_params(ordered_json& row, const SystemParams& p) {
  row["sigma2_a"] = p.sigma2_a;
  row["sigma2_b"] = p.sigma2_b;
  row["sigma2_r"] = p.sigma2_r;
  row["gamma_th"] = p.gamma_th;
  row["weight_a"] = p.weight_a;
  row["weight_b"] = p.weight_b;
}

void put_powers(ordered_json& row, const PowerProfile& powers) {
  row["p_a"] = powers.p_a;
  row["p_b"] = powers.p_b;
  row["p_r"] = powers.p_r;
}

// Weighted age from a success pair, or nothing when either probability lies
// outside (0,1].
std::optional<AoiSummary> aoi_if_computable(const SystemParams& params,
                                            const SuccessPair& pair) {
  if (!(pair.f_a > 0.0 && pair.f_a <= 1.0) ||
      !(pair.f_b > 0.0 && pair.f_b <= 1.0)) {
    return std::nullopt;
  }
  return weighted_sum_aoi(params, pair);
}

ordered_json opt_number(const std::optional<double>& v) {
  return v ? ordered_json(*v) : ordered_json(nullptr);
}

void emit(const Scenario& s, Command cmd, const RecordTable& table,
          const std::string& path) {
  write_file(path, render(table, s.output.format));
  std::cout << to_string(cmd) << ": wrote " << path << "\n";
}

int run_analyze(const Scenario& s, const std::string& path,
                unsigned threads) {
  const PowerProfile& powers = *s.powers;
  const SuccessPair asym = asymptotic_success(s.params, powers);
  const SuccessPair emp = empirical_success_pair(
      s.params, powers, s.sim.n_samples, s.sim.seed, threads);
  const auto aoi_asym = aoi_if_computable(s.params, asym);
  const auto aoi_emp = aoi_if_computable(s.params, emp);

  ordered_json row;
  put_params(row, s.params);
  put_powers(row, powers);
  row["f_a_asym"] = asym.f_a;
  row["f_b_asym"] = asym.f_b;
  row["asym_valid_a"] = asym.valid_a() ? 1 : 0;
  row["asym_valid_b"] = asym.valid_b() ? 1 : 0;
  row["aoi_a_asym"] = aoi_asym ? ordered_json(aoi_asym->aoi_a) : nullptr;
  row["aoi_b_asym"] = aoi_asym ? ordered_json(aoi_asym->aoi_b) : nullptr;
  row["aoi_weighted_asym"] =
      aoi_asym ? ordered_json(aoi_asym->weighted) : nullptr;
  row["f_a_emp"] = emp.f_a;
  row["f_b_emp"] = emp.f_b;
  row["ci_a_emp"] = emp.ci_halfwidth_a;
  row["ci_b_emp"] = emp.ci_halfwidth_b;
  row["aoi_a_emp"] = aoi_emp ? ordered_json(aoi_emp->aoi_a) : nullptr;
  row["aoi_b_emp"] = aoi_emp ? ordered_json(aoi_emp->aoi_b) : nullptr;
  row["aoi_weighted_emp"] = aoi_emp ? ordered_json(aoi_emp->weighted) : nullptr;
  row["n_samples"] = s.sim.n_samples;
  row["seed"] = s.sim.seed;

  RecordTable table;
  table.comments = {"analyze: closed-form and Monte Carlo link statistics at "
                    "one operating point",
                    "empirical columns carry 95% confidence half-widths"};
  table.rows.push_back(row);
  emit(s, Command::analyze, table, path);

  std::cout << "  F asymptotic: (" << format_sig9(asym.f_a) << ", "
            << format_sig9(asym.f_b) << ")"
            << (asym.valid() ? "" : "  [outside (0,1): flagged invalid]")
            << "\n  F empirical:  (" << format_sig9(emp.f_a) << ", "
            << format_sig9(emp.f_b) << ")\n";
  if (aoi_asym) {
    std::cout << "  weighted AoI (asymptotic): "
              << format_sig9(aoi_asym->weighted) << "\n";
  }
  if (aoi_emp) {
    std::cout << "  weighted AoI (empirical):  "
              << format_sig9(aoi_emp->weighted) << "\n";
  }
  return 0;
}

void put_candidate(ordered_json& row, const char* prefix,
                   const Candidate& cand,
                   const std::optional<double>& certificate) {
  const std::string p(prefix);
  row[p + "_p_a"] = cand.p_a;
  row[p + "_p_b"] = cand.p_b;
  row[p + "_objective"] = opt_number(cand.objective);
  row[p + "_provenance"] = to_string(cand.provenance);
  row[p + "_certificate"] = opt_number(certificate);
  row[p + "_diagnostic"] = cand.diagnostic;
}

void put_interval(ordered_json& row, const char* prefix,
                  const FeasibleInterval& iv) {
  const std::string p(prefix);
  row[p + "_lower"] = iv.lower;
  row[p + "_upper"] = iv.upper;
  row[p + "_nonempty"] = iv.nonempty ? 1 : 0;
}

int run_optimize(const Scenario& s, const std::string& path,
                 unsigned threads) {
  OptimizerResult res;
  try {
    res = theorem1_optimize(s.params, s.min_success);
  } catch (const InfeasibleError& e) {
    std::cerr << "optimize: infeasible: " << e.what() << "\n"
              << "  interval fixing p_a at its peak: ["
              << format_sig9(e.interval_solve_b.lower) << ", "
              << format_sig9(e.interval_solve_b.upper)
              << "] nonempty=" << e.interval_solve_b.nonempty << "\n"
              << "  interval fixing p_b at its peak: ["
              << format_sig9(e.interval_solve_a.lower) << ", "
              << format_sig9(e.interval_solve_a.upper)
              << "] nonempty=" << e.interval_solve_a.nonempty << "\n";
    return 2;
  }

  const bool tie = res.candidates[0].objective && res.candidates[1].objective &&
                   std::abs(*res.candidates[0].objective -
                            *res.candidates[1].objective) <= 1e-12;

  ordered_json row;
  put_params(row, s.params);
  row["peak_a"] = s.params.peak_a;
  row["peak_b"] = s.params.peak_b;
  row["peak_r"] = s.params.peak_r;
  row["min_success"] = s.min_success;
  row["p_a_star"] = res.p_a_star;
  row["p_b_star"] = res.p_b_star;
  row["p_r_star"] = res.p_r_star;
  row["aoi_star"] = res.aoi_star;
  row["objective_star"] = res.aoi_star - 0.5;
  row["tie_break_to_peak_a"] = tie ? 1 : 0;
  put_candidate(row, "cand_peak_a", res.candidates[0], res.certificates[0]);
  put_candidate(row, "cand_peak_b", res.candidates[1], res.certificates[1]);
  put_interval(row, "interval_fix_a", res.intervals[0]);
  put_interval(row, "interval_fix_b", res.intervals[1]);

  if (s.oracle_step) {
    const Candidate oracle =
        grid_search_oracle(s.params, *s.oracle_step, s.min_success, threads);
    row["oracle_step"] = *s.oracle_step;
    row["oracle_p_a"] = oracle.p_a;
    row["oracle_p_b"] = oracle.p_b;
    row["oracle_objective"] = opt_number(oracle.objective);
    row["oracle_gap_p_a"] = std::abs(oracle.p_a - res.p_a_star);
    row["oracle_gap_p_b"] = std::abs(oracle.p_b - res.p_b_star);
    row["oracle_gap_objective"] =
        std::abs(*oracle.objective - (res.aoi_star - 0.5));
  }

  RecordTable table;
  table.comments = {"optimize: peak-boundary candidates and the minimizer of "
                    "the expected weighted-sum AoI"};
  table.rows.push_back(row);
  emit(s, Command::optimize, table, path);

  std::cout << "  optimum: p_a=" << format_sig9(res.p_a_star)
            << " p_b=" << format_sig9(res.p_b_star)
            << " p_r=" << format_sig9(res.p_r_star)
            << "  weighted AoI=" << format_sig9(res.aoi_star) << "\n";
  if (tie) {
    std::cout << "  candidates tied within 1e-12; kept the peak-p_a one\n";
  }
  if (s.oracle_step) {
    std::cout << "  grid oracle gap: p_a=" << format_sig9(row["oracle_gap_p_a"].get<double>())
              << " p_b=" << format_sig9(row["oracle_gap_p_b"].get<double>())
              << " objective=" << format_sig9(row["oracle_gap_objective"].get<double>())
              << "\n";
  }
  return 0;
}

int run_simulate(const Scenario& s, const std::string& path) {
  SlotSimConfig cfg;
  cfg.n_slots = s.sim.n_slots;
  cfg.seed = s.sim.seed;
  cfg.params = s.params;
  cfg.powers = *s.powers;
  const SimStats stats = run_simulation(cfg);

  const SuccessPair asym = asymptotic_success(s.params, cfg.powers);
  const auto aoi_asym = aoi_if_computable(s.params, asym);
  const double aoi_sim = s.params.weight_a * stats.mean_aoi_a +
                         s.params.weight_b * stats.mean_aoi_b;
  std::optional<double> aoi_from_emp;
  if (stats.empirical_f_a > 0.0 && stats.empirical_f_b > 0.0) {
    aoi_from_emp = 0.5 + 2.0 * (s.params.weight_a / stats.empirical_f_a +
                                s.params.weight_b / stats.empirical_f_b);
  }

  // Short runs keep the renewal check meaningful by widening the AoI band.
  std::optional<ConsistencyReport> report;
  if (stats.n_rounds >= 10'000 && stats.n_interdep_a > 0 &&
      stats.n_interdep_b > 0) {
    const double rel_tol = s.sim.n_slots >= 5'000'000 ? 0.005 : 0.03;
    report = interdeparture_consistency(stats, rel_tol);
  }

  ordered_json row;
  put_params(row, s.params);
  put_powers(row, cfg.powers);
  row["n_slots"] = s.sim.n_slots;
  row["seed"] = s.sim.seed;
  row["n_rounds"] = stats.n_rounds;
  row["mean_aoi_a"] = stats.mean_aoi_a;
  row["mean_aoi_b"] = stats.mean_aoi_b;
  row["aoi_weighted_sim"] = aoi_sim;
  row["empirical_f_a"] = stats.empirical_f_a;
  row["empirical_f_b"] = stats.empirical_f_b;
  row["mean_interdep_a"] = stats.mean_interdep_a;
  row["mean_interdep_b"] = stats.mean_interdep_b;
  row["second_moment_interdep_a"] = stats.second_moment_interdep_a;
  row["second_moment_interdep_b"] = stats.second_moment_interdep_b;
  row["n_interdep_a"] = stats.n_interdep_a;
  row["n_interdep_b"] = stats.n_interdep_b;
  row["aoi_weighted_asym"] = aoi_asym ? ordered_json(aoi_asym->weighted) : nullptr;
  row["aoi_weighted_from_emp_f"] = opt_number(aoi_from_emp);
  row["consistency_pass"] =
      report ? ordered_json(report->pass() ? 1 : 0) : nullptr;

  RecordTable table;
  table.comments = {"simulate: slot-level age process of the two-slot "
                    "exchange; analytic references computed from asymptotic "
                    "and run-empirical success fractions"};
  table.rows.push_back(row);
  emit(s, Command::simulate, table, path);

  std::cout << "  mean AoI: a=" << format_sig9(stats.mean_aoi_a)
            << " b=" << format_sig9(stats.mean_aoi_b)
            << " weighted=" << format_sig9(aoi_sim) << "\n";
  if (report) {
    std::cout << "  renewal consistency: "
              << (report->pass() ? "pass" : "FAIL") << "\n";
  }
  return 0;
}

int run_sweep(const Scenario& s, const std::string& path, unsigned threads) {
  const SweepSpec& sw = *s.sweep;
  const double p_r = sw.p_r.value_or(s.params.peak_r);
  const bool vary_b = sw.vary == "p_b";

  std::vector<double> points;
  for (std::uint64_t i = 0;; ++i) {
    const double v = sw.start + static_cast<double>(i) * sw.step;
    if (v > sw.stop + 1e-9 * sw.step) break;
    points.push_back(v);
  }

  std::vector<ordered_json> rows(points.size());
  parallel_blocks(points.size(), threads, [&](std::uint64_t i) {
    PowerProfile powers;
    powers.p_a = vary_b ? sw.fixed_power : points[i];
    powers.p_b = vary_b ? points[i] : sw.fixed_power;
    powers.p_r = p_r;

    const SuccessPair asym = asymptotic_success(s.params, powers);
    const auto aoi_asym = aoi_if_computable(s.params, asym);
    const SuccessPair emp = empirical_success_pair(
        s.params, powers, s.sim.n_samples, derive_seed(s.sim.seed, 2 * i), 1);
    const auto aoi_emp = aoi_if_computable(s.params, emp);

    SlotSimConfig cfg;
    cfg.n_slots = s.sim.n_slots;
    cfg.seed = derive_seed(s.sim.seed, 2 * i + 1);
    cfg.params = s.params;
    cfg.powers = powers;
    const SimStats stats = run_simulation(cfg);
    const double aoi_sim = s.params.weight_a * stats.mean_aoi_a +
                           s.params.weight_b * stats.mean_aoi_b;

    ordered_json row;
    put_params(row, s.params);
    row["point_index"] = i;
    put_powers(row, powers);
    row["f_a_asym"] = asym.f_a;
    row["f_b_asym"] = asym.f_b;
    row["asym_valid_a"] = asym.valid_a() ? 1 : 0;
    row["asym_valid_b"] = asym.valid_b() ? 1 : 0;
    row["aoi_weighted_asym"] =
        aoi_asym ? ordered_json(aoi_asym->weighted) : nullptr;
    row["f_a_emp"] = emp.f_a;
    row["f_b_emp"] = emp.f_b;
    row["ci_a_emp"] = emp.ci_halfwidth_a;
    row["ci_b_emp"] = emp.ci_halfwidth_b;
    row["aoi_weighted_emp"] = aoi_emp ? ordered_json(aoi_emp->weighted) : nullptr;
    row["aoi_weighted_sim"] = aoi_sim;
    row["n_samples"] = s.sim.n_samples;
    row["n_slots"] = s.sim.n_slots;
    row["seed"] = s.sim.seed;
    rows[i] = std::move(row);
  });

  RecordTable table;
  table.comments = {
      "sweep of " + sw.vary + " with the other source power fixed at " +
          format_sig9(sw.fixed_power),
      "no closed-form exact success probability is emitted; the empirical "
      "columns are Monte Carlo estimates with 95% CI half-widths and stand in "
      "for exact curves",
      "analytic columns are empty where an asymptotic probability leaves "
      "(0,1)"};
  for (auto& row : rows) table.rows.push_back(std::move(row));
  emit(s, Command::sweep, table, path);
  std::cout << "  " << points.size() << " sweep points\n";
  return 0;
}

int run_grid(const Scenario& s, const std::string& path, unsigned threads) {
  const GridSpec& g = *s.grid;
  const auto axis = [&](double start, double stop) {
    std::vector<double> vals;
    for (std::uint64_t i = 0;; ++i) {
      const double v = start + static_cast<double>(i) * g.step;
      if (v > stop + 1e-9 * g.step) break;
      vals.push_back(v);
    }
    return vals;
  };
  const std::vector<double> a_vals =
      axis(g.start_a.value_or(g.step), g.stop_a.value_or(s.params.peak_a));
  const std::vector<double> b_vals =
      axis(g.start_b.value_or(g.step), g.stop_b.value_or(s.params.peak_b));

  std::vector<std::vector<ordered_json>> row_chunks(a_vals.size());
  parallel_blocks(a_vals.size(), threads, [&](std::uint64_t i) {
    const double p_a = a_vals[i];
    auto& chunk = row_chunks[i];
    for (const double p_b : b_vals) {
      const auto obj = objective_f(s.params, p_a, p_b, g.min_success);
      if (!obj) continue;  // outside the feasibility / min-success region
      ordered_json row;
      put_params(row, s.params);
      row["p_a"] = p_a;
      row["p_b"] = p_b;
      row["p_r"] = s.params.peak_r;
      row["f_a_asym"] = success_a_pinned(s.params, p_a, p_b);
      row["f_b_asym"] = success_b_pinned(s.params, p_a, p_b);
      row["aoi_weighted_asym"] = 0.5 + *obj;
      chunk.push_back(std::move(row));
    }
  });

  RecordTable table;
  table.comments = {
      "grid of asymptotic weighted AoI over (p_a, p_b) with the relay power "
      "pinned at its peak",
      "rows cover feasible points only: both success probabilities above " +
          format_sig9(g.min_success)};
  std::optional<ordered_json> argmin;
  for (auto& chunk : row_chunks) {
    for (auto& row : chunk) {
      const double aoi = row["aoi_weighted_asym"].get<double>();
      if (!argmin || aoi < (*argmin)["aoi_weighted_asym"].get<double>()) {
        argmin = row;
      }
      table.rows.push_back(std::move(row));
    }
  }

  int code = 0;
  if (argmin) {
    const std::string line = "argmin p_a=" +
                             format_sig9((*argmin)["p_a"].get<double>()) +
                             " p_b=" +
                             format_sig9((*argmin)["p_b"].get<double>()) +
                             " aoi_weighted=" +
                             format_sig9(
                                 (*argmin)["aoi_weighted_asym"].get<double>());
    table.footer_comments.push_back(line);
    table.extra["argmin"] = {
        {"p_a", (*argmin)["p_a"].get<double>()},
        {"p_b", (*argmin)["p_b"].get<double>()},
        {"aoi_weighted_asym", (*argmin)["aoi_weighted_asym"].get<double>()}};
  } else {
    table.footer_comments.push_back("argmin: no feasible grid point");
    code = 2;
  }
  emit(s, Command::grid, table, path);
  std::cout << "  " << table.rows.size() << " feasible grid points\n";
  if (argmin) std::cout << "  " << table.footer_comments.back() << "\n";
  return code;
}

}  // namespace

int run_command(Command command, Scenario scenario,
                const RunOptions& options) {
  prepare_for(command, scenario);
  if (options.print_config) {
    std::cout << scenario_to_json(scenario).dump(2) << "\n";
  }
  const std::string path = resolve_output_path(scenario, command);
  switch (command) {
    case Command::analyze:
      return run_analyze(scenario, path, options.threads);
    case Command::optimize:
      return run_optimize(scenario, path, options.threads);
    case Command::simulate:
      return run_simulate(scenario, path);
    case Command::sweep:
      return run_sweep(scenario, path, options.threads);
    case Command::grid:
      return run_grid(scenario, path, options.threads);
  }
  return 1;
}

}  // namespace twraoi
