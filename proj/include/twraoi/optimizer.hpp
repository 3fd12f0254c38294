#ifndef TWRAOI_OPTIMIZER_HPP_
#define TWRAOI_OPTIMIZER_HPP_

#include <array>
#include <optional>
#include <stdexcept>
#include <string>

#include "twraoi/model.hpp"

// Minimizes the expected weighted-sum age over the source powers under peak
// constraints, with the relay pinned at its peak. The two-dimensional problem
// is non-convex, but each one-dimensional slice (one source power fixed) is
// convex on its feasible interval and has a closed-form minimizer; the global
// optimum places at least one source at its peak, so it is the better of the
// two boundary candidates. A golden-section fallback guards the closed form
// and a brute-force grid oracle verifies it.

namespace twraoi {

// Which source power is being solved for, the other being held fixed.
enum class Direction { solve_for_b, solve_for_a };

// Coefficients of the closed-form slice minimizer (beta*theta + phi) / kappa.
struct LemmaCoefficients {
  double beta = 0.0;  // always nonnegative
  double theta = 0.0;
  double phi = 0.0;
  double kappa = 0.0;
};

// Open interval (lower, upper) of the solved power inside which both pinned
// success probabilities lie in (min_success, 1).
struct FeasibleInterval {
  double lower = 0.0;
  double upper = 0.0;
  bool nonempty = false;
};

enum class Provenance {
  lemma1_at_peak_a,  // closed-form slice minimum with p_a fixed
  lemma2_at_peak_b,  // closed-form slice minimum with p_b fixed
  clamped_to_peak,   // interior root above the peak, clamped
  numeric_fallback,  // golden-section result
  grid_oracle,       // brute-force grid argmin
};

const char* to_string(Provenance p);

struct Candidate {
  double p_a = 0.0;
  double p_b = 0.0;
  std::optional<double> objective;  // nullopt when infeasible
  Provenance provenance = Provenance::numeric_fallback;
  std::string diagnostic;  // nonempty when a fallback or rejection fired
};

class InfeasibleError : public std::runtime_error {
 public:
  InfeasibleError(const std::string& msg, FeasibleInterval solve_b,
                  FeasibleInterval solve_a)
      : std::runtime_error(msg), interval_solve_b(solve_b),
        interval_solve_a(solve_a) {}

  FeasibleInterval interval_solve_b;
  FeasibleInterval interval_solve_a;
};

// Range of the solved power within which both pinned success probabilities
// exceed min_success (and stay below 1); the relay is pinned at peak_r.
// nonempty is false when no such power exists, in particular when
// peak_r * (1 - min_success) <= gamma_th * sigma2 at the improving link's
// destination.
FeasibleInterval feasible_interval(const SystemParams& params,
                                   double fixed_power, Direction direction,
                                   double min_success = 0.0);

// Coefficients of the stationary point of the slice objective.
LemmaCoefficients lemma_coefficients(const SystemParams& params,
                                     double fixed_power, Direction direction);

// The sign-flipped-theta sibling root (beta*(-theta) + phi) / kappa. It is
// never inside the feasible interval; kept callable as a verification hook.
double rejected_root(const SystemParams& params, double fixed_power,
                     Direction direction);

// Closed-form second derivative of the slice objective at (p_a, p_b); the
// convexity certificate. Positive everywhere inside the feasible interval.
// Throws std::domain_error outside it.
double second_derivative_slice(const SystemParams& params, double p_a,
                               double p_b, Direction direction);

// Minimum of the slice objective over (interval) x (0, peak]: the interior
// root when it is below the peak, the peak otherwise. Falls back to
// golden-section search when kappa degenerates, when the root fails its
// interval check, or when a min_success constraint excludes the root.
Candidate conditional_optimum(const SystemParams& params, double fixed_power,
                              Direction direction, double min_success = 0.0);

// Golden-section minimization of the slice objective over the feasible
// interval clipped at the peak. tol is on the power argument.
Candidate numeric_fallback(const SystemParams& params, double fixed_power,
                           Direction direction, double tol = 1e-10,
                           int max_iter = 200, double min_success = 0.0);

struct OptimizerResult {
  double p_a_star = 0.0;
  double p_b_star = 0.0;
  double p_r_star = 0.0;  // always peak_r
  double aoi_star = 0.0;  // 1/2 + minimum objective
  // [0]: p_a fixed at its peak, p_b solved; [1]: p_b fixed, p_a solved.
  std::array<Candidate, 2> candidates;
  std::array<FeasibleInterval, 2> intervals;
  // Slice convexity certificates at the two candidate points.
  std::array<std::optional<double>, 2> certificates;
};

// Boundary-candidate optimization: evaluates both peak-pinned slices and
// returns the argmin. Ties within 1e-12 resolve to the peak-p_a candidate.
// Throws InfeasibleError with both interval diagnostics when neither
// candidate admits a feasible power.
OptimizerResult theorem1_optimize(const SystemParams& params,
                                  double min_success = 0.0);

// Exhaustive evaluation of the objective over the grid
// {step, 2*step, ...} x {...} up to the peaks (the exact peak values are
// appended when the step does not land on them). Infeasible points are
// skipped; ties resolve to smaller p_a then smaller p_b, so the result does
// not depend on the worker count.
Candidate grid_search_oracle(const SystemParams& params, double step,
                             double min_success = 0.0, unsigned n_threads = 0);

}  // namespace twraoi

#endif  // TWRAOI_OPTIMIZER_HPP_
