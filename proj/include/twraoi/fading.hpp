#ifndef TWRAOI_FADING_HPP_
#define TWRAOI_FADING_HPP_

#include <cstdint>

#include "twraoi/model.hpp"
#include "twraoi/rng.hpp"

// Rayleigh block-fading sampler and Monte Carlo estimator of the exact
// per-link success probability P(SNR >= gamma_th). The channels are unit-mean
// Rayleigh, so the squared magnitudes are independent Exp(1) variates. One
// draw pair models one two-slot round; both link outcomes of a round come
// from the same pair.

namespace twraoi {

// Squared channel magnitudes for one round.
struct ChannelDraw {
  double g_a = 0.0;  // |h_A|^2, channel between source A and the relay
  double g_b = 0.0;  // |h_B|^2, channel between source B and the relay
};

// Draws g_a then g_b from `rng`; the consumption order is part of the
// reproducibility contract.
ChannelDraw sample_channel_pair(Rng& rng);

struct EmpiricalSuccess {
  double estimate = 0.0;        // fraction of rounds meeting the threshold
  std::uint64_t n_samples = 0;  // number of simulated rounds
  double ci_halfwidth = 0.0;    // 1.96 * sqrt(p(1-p)/n)
  std::uint64_t seed = 0;       // base seed the draws derive from
};

// Monte Carlo estimate of P(instantaneous_snr >= gamma_th) at destination
// `dest`. Samples are split into fixed-size blocks with per-block derived
// seeds and integer success counts are summed, so the result is bit-identical
// for any worker count. The threshold comparison is inclusive.
EmpiricalSuccess empirical_success_probability(const SystemParams& params,
                                               const PowerProfile& powers,
                                               Source dest,
                                               std::uint64_t n_samples,
                                               std::uint64_t seed,
                                               unsigned n_threads = 0);

// Both destinations evaluated on the same channel draws (one physical fading
// realization per round yields both link outcomes). Returned pair is tagged
// empirical and carries 95% confidence half-widths.
SuccessPair empirical_success_pair(const SystemParams& params,
                                   const PowerProfile& powers,
                                   std::uint64_t n_samples, std::uint64_t seed,
                                   unsigned n_threads = 0);

}  // namespace twraoi

#endif  // TWRAOI_FADING_HPP_
