#ifndef TWRAOI_MODEL_HPP_
#define TWRAOI_MODEL_HPP_

#include <optional>

// Closed-form model of a two-source amplify-and-forward relay status-update
// system running a two-slot exchange: both sources transmit to the relay in
// slot one, the relay amplifies and broadcasts in slot two. All quantities are
// linear scale; time is measured in slots.

namespace twraoi {

enum class Source { A, B };

// Static system description: receiver noise variances, the SNR acceptance
// threshold, the per-source age weights, and the per-node peak powers.
struct SystemParams {
  double sigma2_a = 0.0;  // noise variance at source A
  double sigma2_b = 0.0;  // noise variance at source B
  double sigma2_r = 0.0;  // noise variance at the relay
  double gamma_th = 0.0;  // SNR threshold, linear scale
  double weight_a = 0.5;  // age weight of destination A, in (0,1)
  double weight_b = 0.5;  // age weight of destination B, in (0,1)
  double peak_a = 0.0;    // peak transmit power of source A
  double peak_b = 0.0;    // peak transmit power of source B
  double peak_r = 0.0;    // peak transmit power of the relay

  // Throws std::invalid_argument unless all variances/peaks are positive,
  // gamma_th >= 0, both weights lie in (0,1), and weight_a + weight_b == 1
  // within 1e-12.
  void validate() const;
};

// One operating point: the transmit powers actually used.
struct PowerProfile {
  double p_a = 0.0;
  double p_b = 0.0;
  double p_r = 0.0;

  void validate() const;  // all three strictly positive
  // Additionally checks p <= corresponding peak.
  void validate_against(const SystemParams& params) const;
};

// Transmit powers normalized by the receiving node's noise variance.
struct NormalizedSnrs {
  double gamma_a = 0.0;   // p_a / sigma2_r (source A uplink)
  double gamma_b = 0.0;   // p_b / sigma2_r (source B uplink)
  double gamma_ra = 0.0;  // p_r / sigma2_a (relay downlink into A)
  double gamma_rb = 0.0;  // p_r / sigma2_b (relay downlink into B)
};

NormalizedSnrs normalized_snrs(const SystemParams& params,
                               const PowerProfile& powers);

// End-to-end received SNR at destination `dest` for channel power gains
// `gain_dest` (the destination's own relay channel) and `gain_src` (the other
// source's relay channel). Zero when either gain is zero.
double instantaneous_snr(const NormalizedSnrs& snrs, double gain_dest,
                         double gain_src, Source dest);

enum class SuccessKind { asymptotic, empirical };

// Per-direction round success probabilities. f_a is the probability that
// destination A receives the other source's update in one two-slot round;
// f_b likewise for destination B.
struct SuccessPair {
  double f_a = 0.0;
  double f_b = 0.0;
  SuccessKind kind = SuccessKind::asymptotic;
  double ci_halfwidth_a = 0.0;  // 95% half-width, empirical estimates only
  double ci_halfwidth_b = 0.0;

  // Asymptotic values are valid only strictly inside (0,1); empirical
  // estimates are valid anywhere in [0,1].
  bool valid_a() const;
  bool valid_b() const;
  bool valid() const { return valid_a() && valid_b(); }
};

// High-SNR success probabilities. Out-of-range values are returned as-is and
// show up through the validity flags; sweeps and the optimizer's feasibility
// logic both need to see where validity fails.
SuccessPair asymptotic_success(const SystemParams& params,
                               const PowerProfile& powers);

// Average age at one destination given its round success probability
// f in (0,1]: 1/2 + 2/f slots. Minimum 2.5 at f = 1.
double aoi_per_source(double f);

struct AoiSummary {
  double aoi_a = 0.0;
  double aoi_b = 0.0;
  double weighted = 0.0;  // weight_a * aoi_a + weight_b * aoi_b
};

// Throws std::domain_error unless both probabilities lie in (0,1].
AoiSummary weighted_sum_aoi(const SystemParams& params,
                            const SuccessPair& pair);

// Success probabilities with the relay pinned at its peak power (the relay
// power only ever helps, so the optimizer never searches over it).
double success_a_pinned(const SystemParams& params, double p_a, double p_b);
double success_b_pinned(const SystemParams& params, double p_a, double p_b);

// Reducible part of the weighted-sum age at (p_a, p_b) with the relay at its
// peak: weighted age minus its constant first term 1/2, i.e.
// 2*(weight_a/F_a + weight_b/F_b). Returns nullopt when either pinned success
// probability leaves (0, min_success excluded at the bottom, 1), so grid
// sweeps can traverse infeasible regions without throwing.
std::optional<double> objective_f(const SystemParams& params, double p_a,
                                  double p_b, double min_success = 0.0);

}  // namespace twraoi

#endif  // TWRAOI_MODEL_HPP_
