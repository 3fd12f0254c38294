#include "twraoi/simulator.hpp"

#include <cmath>
#include <stdexcept>

#include "twraoi/fading.hpp"
#include "twraoi/rng.hpp"

namespace twraoi {

void SlotSimConfig::validate() const {
  params.validate();
  powers.validate();
  if (n_slots < 2 || n_slots % 2 != 0) {
    throw std::invalid_argument(
        "n_slots must be even and at least 2 (whole rounds)");
  }
}

namespace {

// Per-destination age recursion and renewal bookkeeping.
struct DestinationState {
  std::uint64_t aoi = 2;
  std::uint64_t aoi_sum = 0;
  std::uint64_t successes = 0;
  std::uint64_t last_success_round = 0;  // virtual success before t = 0
  std::uint64_t interdep_count = 0;
  double interdep_sum = 0.0;
  double interdep_sq_sum = 0.0;

  void slot_one() {
    ++aoi;
    aoi_sum += aoi;
  }

  void slot_two(bool success, std::uint64_t round) {
    if (success) {
      ++successes;
      const auto t = static_cast<double>(2 * (round - last_success_round));
      last_success_round = round;
      ++interdep_count;
      interdep_sum += t;
      interdep_sq_sum += t * t;
      aoi = 2;  // delivered update was generated two slots earlier
    } else {
      ++aoi;
    }
    aoi_sum += aoi;
  }
};

}  // namespace

SimStats run_simulation(const SlotSimConfig& config,
                        const SlotObserver& observer) {
  config.validate();
  const NormalizedSnrs snrs = normalized_snrs(config.params, config.powers);
  const double threshold = config.params.gamma_th;
  const std::uint64_t n_rounds = config.n_slots / 2;

  Rng rng(config.seed);
  DestinationState a, b;
  for (std::uint64_t round = 1; round <= n_rounds; ++round) {
    const ChannelDraw draw = sample_channel_pair(rng);
    a.slot_one();
    b.slot_one();
    if (observer) observer(2 * round - 2, a.aoi, b.aoi);
    const bool ok_a =
        instantaneous_snr(snrs, draw.g_a, draw.g_b, Source::A) >= threshold;
    const bool ok_b =
        instantaneous_snr(snrs, draw.g_b, draw.g_a, Source::B) >= threshold;
    a.slot_two(ok_a, round);
    b.slot_two(ok_b, round);
    if (observer) observer(2 * round - 1, a.aoi, b.aoi);
  }

  const auto slots = static_cast<double>(config.n_slots);
  SimStats stats;
  stats.mean_aoi_a = static_cast<double>(a.aoi_sum) / slots;
  stats.mean_aoi_b = static_cast<double>(b.aoi_sum) / slots;
  stats.empirical_f_a =
      static_cast<double>(a.successes) / static_cast<double>(n_rounds);
  stats.empirical_f_b =
      static_cast<double>(b.successes) / static_cast<double>(n_rounds);
  stats.n_rounds = n_rounds;
  stats.n_interdep_a = a.interdep_count;
  stats.n_interdep_b = b.interdep_count;
  if (a.interdep_count > 0) {
    stats.mean_interdep_a = a.interdep_sum / static_cast<double>(a.interdep_count);
    stats.second_moment_interdep_a =
        a.interdep_sq_sum / static_cast<double>(a.interdep_count);
  }
  if (b.interdep_count > 0) {
    stats.mean_interdep_b = b.interdep_sum / static_cast<double>(b.interdep_count);
    stats.second_moment_interdep_b =
        b.interdep_sq_sum / static_cast<double>(b.interdep_count);
  }
  return stats;
}

namespace {

ConsistencyCheck check_abs(double observed, double expected, double tol) {
  return {observed, expected, tol, std::abs(observed - expected) <= tol};
}

// Moments of the interdeparture time T = 2 * Geometric(f) under the renewal
// model, used both as expectations and to size the 3-sigma bands.
struct GeometricModel {
  double mean_t = 0.0;
  double second_t = 0.0;
  double sd_mean = 0.0;    // standard error of the sample mean of T
  double sd_second = 0.0;  // standard error of the sample mean of T^2

  GeometricModel(double f, std::uint64_t n_intervals) {
    const double q = 1.0 - f;
    mean_t = 2.0 / f;
    second_t = 4.0 * (2.0 - f) / (f * f);
    const double var_t = 4.0 * q / (f * f);
    const double var_t2 =
        16.0 * q * (1.0 + q) * (9.0 + q) / (f * f * f * f);
    const auto n = static_cast<double>(n_intervals);
    sd_mean = std::sqrt(var_t / n);
    sd_second = std::sqrt(var_t2 / n);
  }
};

}  // namespace

ConsistencyReport interdeparture_consistency(const SimStats& stats,
                                             double aoi_rel_tol) {
  if (stats.n_rounds < 10'000) {
    throw std::invalid_argument(
        "consistency report requires at least 10^4 rounds");
  }
  if (stats.n_interdep_a == 0 || stats.n_interdep_b == 0) {
    throw std::invalid_argument(
        "consistency report requires at least one delivery per destination");
  }

  ConsistencyReport report;
  const GeometricModel model_a(stats.empirical_f_a, stats.n_interdep_a);
  const GeometricModel model_b(stats.empirical_f_b, stats.n_interdep_b);

  report.mean_interdep_a =
      check_abs(stats.mean_interdep_a, model_a.mean_t, 3.0 * model_a.sd_mean);
  report.mean_interdep_b =
      check_abs(stats.mean_interdep_b, model_b.mean_t, 3.0 * model_b.sd_mean);
  report.second_moment_a = check_abs(stats.second_moment_interdep_a,
                                     model_a.second_t, 3.0 * model_a.sd_second);
  report.second_moment_b = check_abs(stats.second_moment_interdep_b,
                                     model_b.second_t, 3.0 * model_b.sd_second);
  report.mean_aoi_a =
      check_abs(stats.mean_aoi_a, 0.5 + 2.0 / stats.empirical_f_a,
                aoi_rel_tol * stats.mean_aoi_a);
  report.mean_aoi_b =
      check_abs(stats.mean_aoi_b, 0.5 + 2.0 / stats.empirical_f_b,
                aoi_rel_tol * stats.mean_aoi_b);
  return report;
}

}  // namespace twraoi
