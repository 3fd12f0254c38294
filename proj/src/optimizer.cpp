#include "twraoi/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <utility>
#include <vector>

#include "twraoi/parallel.hpp"

namespace twraoi {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// One-dimensional slice of the pinned-relay problem: the power of one source
// is fixed, the other is solved for. "up" marks the link whose success
// probability grows with the solved power, "down" the one it degrades.
struct SliceView {
  double fixed = 0.0;
  double s2_up = 0.0;
  double s2_down = 0.0;
  double w_up = 0.0;
  double w_down = 0.0;
  double peak = 0.0;  // peak of the solved power
  double p_r = 0.0;
  double gamma_th = 0.0;
  double s2_r = 0.0;
};

SliceView make_view(const SystemParams& sp, double fixed_power,
                    Direction direction) {
  sp.validate();
  if (!(sp.gamma_th > 0.0)) {
    throw std::invalid_argument("optimizer requires a positive gamma_th");
  }
  if (!(fixed_power > 0.0)) {
    throw std::domain_error("fixed power must be positive");
  }
  SliceView v;
  v.fixed = fixed_power;
  v.p_r = sp.peak_r;
  v.gamma_th = sp.gamma_th;
  v.s2_r = sp.sigma2_r;
  if (direction == Direction::solve_for_b) {
    v.s2_up = sp.sigma2_a;
    v.s2_down = sp.sigma2_b;
    v.w_up = sp.weight_a;
    v.w_down = sp.weight_b;
    v.peak = sp.peak_b;
  } else {
    v.s2_up = sp.sigma2_b;
    v.s2_down = sp.sigma2_a;
    v.w_up = sp.weight_b;
    v.w_down = sp.weight_a;
    v.peak = sp.peak_a;
  }
  return v;
}

std::pair<double, double> assemble(double fixed, double solved,
                                   Direction direction) {
  return direction == Direction::solve_for_b
             ? std::make_pair(fixed, solved)
             : std::make_pair(solved, fixed);
}

double slice_objective(const SystemParams& sp, double fixed, double solved,
                       Direction direction, double min_success) {
  const auto [p_a, p_b] = assemble(fixed, solved, direction);
  return objective_f(sp, p_a, p_b, min_success).value_or(kInf);
}

struct LemmaTerms {
  LemmaCoefficients c;
  double kappa_term1 = 0.0;
  double kappa_term2 = 0.0;
};

LemmaTerms lemma_terms(const SliceView& v) {
  const double g = v.gamma_th;
  const double pr = v.p_r;
  const double sd = std::sqrt(v.s2_down);
  LemmaTerms t;
  t.c.beta = pr * std::sqrt(v.fixed * v.w_up * v.w_down *
                            (v.fixed * v.s2_up + pr * v.s2_r));
  t.c.theta = v.fixed * g * (v.s2_up + v.s2_down) +
              g * g * v.s2_r * (v.s2_down - v.s2_up) + pr * g * v.s2_r -
              v.fixed * pr;
  t.c.phi =
      v.fixed * pr * g * sd * (v.w_up - v.w_down) *
          (v.fixed * v.s2_up + pr * v.s2_r - g * v.s2_up * v.s2_r) +
      g * g * sd *
          (v.w_down * v.fixed * v.fixed * v.s2_up * v.s2_up -
           v.w_up * v.s2_r * v.s2_r * pr * pr -
           v.w_up * v.fixed * v.s2_down * (v.fixed * v.s2_up + pr * v.s2_r));
  t.kappa_term1 = v.w_down * v.fixed * sd *
                  (2.0 * pr * g * v.s2_up - pr * pr - g * g * v.s2_up * v.s2_up);
  t.kappa_term2 =
      v.w_up * g * g * sd * v.s2_down * (v.fixed * v.s2_up + pr * v.s2_r);
  t.c.kappa = t.kappa_term1 + t.kappa_term2;
  return t;
}

InfeasibleError slice_infeasible(const std::string& msg, Direction direction,
                                 const FeasibleInterval& interval) {
  FeasibleInterval solve_b, solve_a;
  (direction == Direction::solve_for_b ? solve_b : solve_a) = interval;
  return InfeasibleError(msg, solve_b, solve_a);
}

Candidate finish_candidate(const SystemParams& sp, double fixed, double solved,
                           Direction direction, double min_success,
                           Provenance provenance) {
  Candidate cand;
  const auto [p_a, p_b] = assemble(fixed, solved, direction);
  cand.p_a = p_a;
  cand.p_b = p_b;
  cand.provenance = provenance;
  cand.objective = objective_f(sp, p_a, p_b, min_success);
  if (!cand.objective) {
    throw std::logic_error(
        "slice optimum landed outside the feasible success range");
  }
  return cand;
}

}  // namespace

const char* to_string(Provenance p) {
  switch (p) {
    case Provenance::lemma1_at_peak_a: return "lemma1-at-peakA";
    case Provenance::lemma2_at_peak_b: return "lemma2-at-peakB";
    case Provenance::clamped_to_peak: return "clamped-to-peak";
    case Provenance::numeric_fallback: return "numeric-fallback";
    case Provenance::grid_oracle: return "grid-oracle";
  }
  return "unknown";
}

FeasibleInterval feasible_interval(const SystemParams& params,
                                   double fixed_power, Direction direction,
                                   double min_success) {
  if (min_success < 0.0 || min_success >= 1.0) {
    throw std::invalid_argument("min_success must lie in [0,1)");
  }
  const SliceView v = make_view(params, fixed_power, direction);
  const double margin = 1.0 - min_success;
  FeasibleInterval iv;
  iv.upper = (v.fixed * v.p_r * margin -
              v.gamma_th * (v.fixed * v.s2_down + v.p_r * v.s2_r)) /
             (v.gamma_th * v.s2_down);
  const double denom = v.p_r * margin - v.gamma_th * v.s2_up;
  if (denom <= 0.0) {
    // The improving link cannot reach a success probability above min_success
    // at any solved power.
    iv.lower = kInf;
    iv.nonempty = false;
    return iv;
  }
  iv.lower = v.gamma_th * (v.p_r * v.s2_r + v.fixed * v.s2_up) / denom;
  iv.nonempty = iv.lower < iv.upper;
  return iv;
}

LemmaCoefficients lemma_coefficients(const SystemParams& params,
                                     double fixed_power, Direction direction) {
  return lemma_terms(make_view(params, fixed_power, direction)).c;
}

double rejected_root(const SystemParams& params, double fixed_power,
                     Direction direction) {
  const LemmaTerms t = lemma_terms(make_view(params, fixed_power, direction));
  return (t.c.beta * -t.c.theta + t.c.phi) / t.c.kappa;
}

double second_derivative_slice(const SystemParams& params, double p_a,
                               double p_b, Direction direction) {
  const bool solve_b = direction == Direction::solve_for_b;
  const double fixed = solve_b ? p_a : p_b;
  const double solved = solve_b ? p_b : p_a;
  const SliceView v = make_view(params, fixed, direction);
  const FeasibleInterval iv = feasible_interval(params, fixed, direction);
  if (!iv.nonempty || !(solved > iv.lower && solved < iv.upper)) {
    throw std::domain_error("point lies outside the feasible interval");
  }
  const double f_up = solve_b ? success_a_pinned(params, p_a, p_b)
                              : success_b_pinned(params, p_a, p_b);
  const double f_down = solve_b ? success_b_pinned(params, p_a, p_b)
                                : success_a_pinned(params, p_a, p_b);
  const double g = v.gamma_th;
  const double pr = v.p_r;
  const double term_up = 2.0 * v.w_up * g * (v.fixed * v.s2_up + pr * v.s2_r) *
                         (pr - g * v.s2_up) /
                         (solved * solved * solved * pr * pr * f_up * f_up *
                          f_up);
  const double term_down = 2.0 * v.w_down * g * g * v.s2_down * v.s2_down /
                           (v.fixed * v.fixed * pr * pr * f_down * f_down *
                            f_down);
  // The objective carries a factor 2 over the bare weighted reciprocals.
  return 2.0 * (term_up + term_down);
}

Candidate numeric_fallback(const SystemParams& params, double fixed_power,
                           Direction direction, double tol, int max_iter,
                           double min_success) {
  const SliceView v = make_view(params, fixed_power, direction);
  const FeasibleInterval iv =
      feasible_interval(params, fixed_power, direction, min_success);
  if (!iv.nonempty) {
    throw slice_infeasible("slice has no feasible power", direction, iv);
  }
  const double eps = 1e-9 * (iv.upper - iv.lower);
  double lo = iv.lower + eps;
  double hi = std::min(v.peak, iv.upper - eps);
  if (!(hi > lo)) {
    throw slice_infeasible("peak power lies below the feasible interval",
                           direction, iv);
  }

  const double inv_gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = hi - inv_gr * (hi - lo);
  double d = lo + inv_gr * (hi - lo);
  double fc = slice_objective(params, fixed_power, c, direction, min_success);
  double fd = slice_objective(params, fixed_power, d, direction, min_success);
  for (int i = 0; i < max_iter && (hi - lo) > tol; ++i) {
    if (fc < fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - inv_gr * (hi - lo);
      fc = slice_objective(params, fixed_power, c, direction, min_success);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + inv_gr * (hi - lo);
      fd = slice_objective(params, fixed_power, d, direction, min_success);
    }
  }
  return finish_candidate(params, fixed_power, 0.5 * (lo + hi), direction,
                          min_success, Provenance::numeric_fallback);
}

Candidate conditional_optimum(const SystemParams& params, double fixed_power,
                              Direction direction, double min_success) {
  const SliceView v = make_view(params, fixed_power, direction);
  const FeasibleInterval base = feasible_interval(params, fixed_power,
                                                  direction);
  const FeasibleInterval active =
      min_success > 0.0
          ? feasible_interval(params, fixed_power, direction, min_success)
          : base;
  if (!active.nonempty) {
    throw slice_infeasible("slice has no feasible power", direction, active);
  }
  if (!(v.peak > active.lower)) {
    throw slice_infeasible("peak power lies below the feasible interval",
                           direction, active);
  }

  const LemmaTerms t = lemma_terms(v);
  const double kappa_scale =
      std::max(std::abs(t.kappa_term1), std::abs(t.kappa_term2));
  auto fall_back = [&](const char* why) {
    Candidate cand = numeric_fallback(params, fixed_power, direction, 1e-10,
                                      200, min_success);
    cand.diagnostic = why;
    return cand;
  };
  if (std::abs(t.c.kappa) <= 1e-9 * kappa_scale) {
    return fall_back("kappa degenerate; golden-section search used");
  }
  const double root = (t.c.beta * t.c.theta + t.c.phi) / t.c.kappa;
  if (!(root > base.lower && root < base.upper)) {
    return fall_back(
        "closed-form root failed its interval check; golden-section search "
        "used");
  }
  if (min_success > 0.0 && !(root > active.lower && root < active.upper)) {
    return fall_back(
        "min-success constraint excludes the closed-form root; golden-section "
        "search used");
  }
  if (root <= v.peak) {
    const Provenance prov = direction == Direction::solve_for_b
                                ? Provenance::lemma1_at_peak_a
                                : Provenance::lemma2_at_peak_b;
    return finish_candidate(params, fixed_power, root, direction, min_success,
                            prov);
  }
  return finish_candidate(params, fixed_power, v.peak, direction, min_success,
                          Provenance::clamped_to_peak);
}

OptimizerResult theorem1_optimize(const SystemParams& params,
                                  double min_success) {
  params.validate();
  OptimizerResult res;
  res.p_r_star = params.peak_r;
  res.intervals[0] =
      feasible_interval(params, params.peak_a, Direction::solve_for_b,
                        min_success);
  res.intervals[1] =
      feasible_interval(params, params.peak_b, Direction::solve_for_a,
                        min_success);

  const Direction dirs[2] = {Direction::solve_for_b, Direction::solve_for_a};
  const double fixed[2] = {params.peak_a, params.peak_b};
  for (int i = 0; i < 2; ++i) {
    try {
      res.candidates[i] =
          conditional_optimum(params, fixed[i], dirs[i], min_success);
      res.certificates[i] = second_derivative_slice(
          params, res.candidates[i].p_a, res.candidates[i].p_b, dirs[i]);
    } catch (const InfeasibleError& e) {
      Candidate cand;
      const auto [p_a, p_b] = assemble(fixed[i], 0.0, dirs[i]);
      cand.p_a = p_a;
      cand.p_b = p_b;
      cand.diagnostic = e.what();
      res.candidates[i] = cand;
    }
  }

  const auto& c0 = res.candidates[0];
  const auto& c1 = res.candidates[1];
  if (!c0.objective && !c1.objective) {
    throw InfeasibleError("both boundary candidates are infeasible",
                          res.intervals[0], res.intervals[1]);
  }
  int pick = 0;
  if (!c0.objective) {
    pick = 1;
  } else if (c1.objective && *c1.objective < *c0.objective - 1e-12) {
    pick = 1;
  }
  const Candidate& best = res.candidates[pick];
  res.p_a_star = best.p_a;
  res.p_b_star = best.p_b;
  res.aoi_star = 0.5 + *best.objective;
  return res;
}

namespace {

// Grid axis {step, 2*step, ...} clipped at the peak; the peak itself is
// always the last entry.
std::vector<double> grid_axis(double peak, double step) {
  const auto n = static_cast<std::uint64_t>(std::ceil(peak / step - 1e-9));
  std::vector<double> vals;
  vals.reserve(n);
  for (std::uint64_t i = 1; i <= n; ++i) {
    vals.push_back(std::min(static_cast<double>(i) * step, peak));
  }
  if (vals.empty()) vals.push_back(peak);
  return vals;
}

struct GridBest {
  double objective = kInf;
  double p_a = kInf;
  double p_b = kInf;

  void offer(double obj, double a, double b) {
    if (obj < objective ||
        (obj == objective && (a < p_a || (a == p_a && b < p_b)))) {
      objective = obj;
      p_a = a;
      p_b = b;
    }
  }
};

}  // namespace

Candidate grid_search_oracle(const SystemParams& params, double step,
                             double min_success, unsigned n_threads) {
  params.validate();
  if (!(step > 0.0)) throw std::invalid_argument("step must be positive");
  if (!(params.gamma_th > 0.0)) {
    throw std::invalid_argument("optimizer requires a positive gamma_th");
  }
  const std::vector<double> a_vals = grid_axis(params.peak_a, step);
  const std::vector<double> b_vals = grid_axis(params.peak_b, step);

  GridBest best;
  std::mutex merge_mu;
  parallel_blocks(a_vals.size(), n_threads, [&](std::uint64_t row) {
    const double p_a = a_vals[row];
    GridBest local;
    for (const double p_b : b_vals) {
      const auto obj = objective_f(params, p_a, p_b, min_success);
      if (obj) local.offer(*obj, p_a, p_b);
    }
    if (local.objective < kInf) {
      std::lock_guard<std::mutex> lock(merge_mu);
      best.offer(local.objective, local.p_a, local.p_b);
    }
  });

  if (!(best.objective < kInf)) {
    throw InfeasibleError(
        "every grid point is infeasible",
        feasible_interval(params, params.peak_a, Direction::solve_for_b,
                          min_success),
        feasible_interval(params, params.peak_b, Direction::solve_for_a,
                          min_success));
  }
  Candidate cand;
  cand.p_a = best.p_a;
  cand.p_b = best.p_b;
  cand.objective = best.objective;
  cand.provenance = Provenance::grid_oracle;
  return cand;
}

}  // namespace twraoi
