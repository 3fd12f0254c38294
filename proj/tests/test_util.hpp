#ifndef TWRAOI_TESTS_TEST_UTIL_HPP_
#define TWRAOI_TESTS_TEST_UTIL_HPP_

#include <cmath>
#include <optional>
#include <stdexcept>
#include <utility>

#include "twraoi/model.hpp"
#include "twraoi/optimizer.hpp"
#include "twraoi/rng.hpp"

namespace twraoi::test {

// Reference setup used throughout: equal 0.001 noise variances, 20 dB
// threshold, equal weights, peaks (1, 2, 0.75).
inline SystemParams paper_params() {
  SystemParams p;
  p.sigma2_a = p.sigma2_b = p.sigma2_r = 0.001;
  p.gamma_th = 100.0;
  p.weight_a = p.weight_b = 0.5;
  p.peak_a = 1.0;
  p.peak_b = 2.0;
  p.peak_r = 0.75;
  return p;
}

inline PowerProfile paper_powers() { return {1.0, 1.196, 0.75}; }

inline SystemParams swapped_labels(const SystemParams& p) {
  SystemParams q = p;
  std::swap(q.sigma2_a, q.sigma2_b);
  std::swap(q.weight_a, q.weight_b);
  std::swap(q.peak_a, q.peak_b);
  return q;
}

// Draws a parameter set from the randomized-verification ranges:
// sigma^2 in [1e-4, 1e-2], gamma_th in [10, 300], peaks in [0.5, 3],
// weight_a in [0.2, 0.8].
inline SystemParams random_params(Rng& rng) {
  SystemParams p;
  p.sigma2_a = rng.uniform(1e-4, 1e-2);
  p.sigma2_b = rng.uniform(1e-4, 1e-2);
  p.sigma2_r = rng.uniform(1e-4, 1e-2);
  p.gamma_th = rng.uniform(10.0, 300.0);
  p.weight_a = rng.uniform(0.2, 0.8);
  p.weight_b = 1.0 - p.weight_a;
  p.peak_a = rng.uniform(0.5, 3.0);
  p.peak_b = rng.uniform(0.5, 3.0);
  p.peak_r = rng.uniform(0.5, 3.0);
  return p;
}

// Rejection-samples until the peak-power problem is solvable.
inline SystemParams random_feasible_params(Rng& rng,
                                           double min_success = 0.0) {
  for (int i = 0; i < 100000; ++i) {
    SystemParams p = random_params(rng);
    try {
      theorem1_optimize(p, min_success);
      return p;
    } catch (const InfeasibleError&) {
    }
  }
  throw std::runtime_error("could not sample a feasible parameter set");
}

// Random operating point with both pinned success probabilities in
// (floor, 1). floor keeps finite-difference stencils clear of the blowup at
// the feasibility boundary.
inline std::optional<std::pair<double, double>> random_feasible_point(
    const SystemParams& p, Rng& rng, double floor = 0.0, int tries = 500) {
  for (int i = 0; i < tries; ++i) {
    const double p_a = rng.uniform(1e-3 * p.peak_a, p.peak_a);
    const double p_b = rng.uniform(1e-3 * p.peak_b, p.peak_b);
    const double f_a = success_a_pinned(p, p_a, p_b);
    const double f_b = success_b_pinned(p, p_a, p_b);
    if (f_a > floor && f_a < 1.0 && f_b > floor && f_b < 1.0) {
      return std::make_pair(p_a, p_b);
    }
  }
  return std::nullopt;
}

// Independent stationary points of the slice objective, derived directly
// from d/dp [w_up/(a - b/p) + w_down/(c - d*p)] = 0 via its square-root
// parameterization. Shares nothing with the production coefficient formulas.
struct SliceRoots {
  double interior = 0.0;  // the minimizer branch
  double rejected = 0.0;  // the branch outside the feasible interval
};

inline SliceRoots slice_roots_oracle(const SystemParams& sp, double fixed,
                                     Direction dir) {
  const bool solve_b = dir == Direction::solve_for_b;
  const double s2_up = solve_b ? sp.sigma2_a : sp.sigma2_b;
  const double s2_down = solve_b ? sp.sigma2_b : sp.sigma2_a;
  const double w_up = solve_b ? sp.weight_a : sp.weight_b;
  const double w_down = solve_b ? sp.weight_b : sp.weight_a;
  const double pr = sp.peak_r;
  const double g = sp.gamma_th;
  const double a = 1.0 - g * s2_up / pr;
  const double b = g * (pr * sp.sigma2_r + fixed * s2_up) / pr;
  const double c = 1.0 - g * sp.sigma2_r / fixed - g * s2_down / pr;
  const double d = g * s2_down / (pr * fixed);
  const double su = std::sqrt(w_up * b);
  const double sd = std::sqrt(w_down * d);
  SliceRoots roots;
  roots.interior = (su * c + sd * b) / (sd * a + su * d);
  roots.rejected = (sd * b - su * c) / (sd * a - su * d);
  return roots;
}

// Central second difference of the objective along the solved direction.
inline double fd_second_derivative(const SystemParams& sp, double p_a,
                                   double p_b, Direction dir,
                                   double h = 1e-4) {
  const auto obj = [&](double a, double b) {
    return objective_f(sp, a, b).value();
  };
  if (dir == Direction::solve_for_b) {
    return (obj(p_a, p_b + h) - 2.0 * obj(p_a, p_b) + obj(p_a, p_b - h)) /
           (h * h);
  }
  return (obj(p_a + h, p_b) - 2.0 * obj(p_a, p_b) + obj(p_a - h, p_b)) /
         (h * h);
}

}  // namespace twraoi::test

#endif  // TWRAOI_TESTS_TEST_UTIL_HPP_
