#ifndef TWRAOI_SIMULATOR_HPP_
#define TWRAOI_SIMULATOR_HPP_

#include <cstdint>
#include <functional>

#include "twraoi/model.hpp"

// Discrete-time simulation of the per-destination age process under the
// two-slot exchange. Each round spans two slots: both sources generate fresh
// updates at the round's first slot, one fading draw governs the round, and
// each destination independently succeeds when its end-to-end SNR meets the
// threshold. Age is sampled at end-of-slot instants and starts at 2 (a
// virtual successful round precedes t = 0), which reproduces the closed-form
// mean exactly at success probability 1.

namespace twraoi {

struct SlotSimConfig {
  std::uint64_t n_slots = 0;  // even, >= 2
  std::uint64_t seed = 0;
  SystemParams params;
  PowerProfile powers;

  void validate() const;
};

struct SimStats {
  double mean_aoi_a = 0.0;
  double mean_aoi_b = 0.0;
  double mean_interdep_a = 0.0;  // slots between consecutive deliveries
  double mean_interdep_b = 0.0;
  double second_moment_interdep_a = 0.0;
  double second_moment_interdep_b = 0.0;
  double empirical_f_a = 0.0;  // per-round success fraction
  double empirical_f_b = 0.0;
  std::uint64_t n_rounds = 0;
  std::uint64_t n_interdep_a = 0;  // completed renewal intervals observed
  std::uint64_t n_interdep_b = 0;
};

// Called after every simulated slot with the end-of-slot ages. Test hook;
// pass nullptr to skip.
using SlotObserver =
    std::function<void(std::uint64_t slot, std::uint64_t aoi_a,
                       std::uint64_t aoi_b)>;

SimStats run_simulation(const SlotSimConfig& config,
                        const SlotObserver& observer = nullptr);

struct ConsistencyCheck {
  double observed = 0.0;
  double expected = 0.0;
  double tolerance = 0.0;  // absolute
  bool pass = false;
};

// Agreement of a run with the renewal model implied by per-round Bernoulli
// successes: interdeparture mean 2/F and second moment 4(2-F)/F^2 within
// three (model-based) standard errors, and mean age 1/2 + 2/F within
// aoi_rel_tol relative, all evaluated at the run's own success fractions.
struct ConsistencyReport {
  ConsistencyCheck mean_interdep_a, mean_interdep_b;
  ConsistencyCheck second_moment_a, second_moment_b;
  ConsistencyCheck mean_aoi_a, mean_aoi_b;

  bool pass() const {
    return mean_interdep_a.pass && mean_interdep_b.pass &&
           second_moment_a.pass && second_moment_b.pass && mean_aoi_a.pass &&
           mean_aoi_b.pass;
  }
};

// Requires at least 10^4 rounds and at least one delivery per destination.
ConsistencyReport interdeparture_consistency(const SimStats& stats,
                                             double aoi_rel_tol = 0.005);

}  // namespace twraoi

#endif  // TWRAOI_SIMULATOR_HPP_
