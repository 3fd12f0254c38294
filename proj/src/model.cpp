#include "twraoi/model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace twraoi {

namespace {

void require_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw std::invalid_argument(std::string(name) + " must be positive");
  }
}

}  // namespace

void SystemParams::validate() const {
  require_positive(sigma2_a, "sigma2_a");
  require_positive(sigma2_b, "sigma2_b");
  require_positive(sigma2_r, "sigma2_r");
  require_positive(peak_a, "peak_a");
  require_positive(peak_b, "peak_b");
  require_positive(peak_r, "peak_r");
  if (!(gamma_th >= 0.0) || !std::isfinite(gamma_th)) {
    throw std::invalid_argument("gamma_th must be nonnegative");
  }
  if (!(weight_a > 0.0 && weight_a < 1.0) ||
      !(weight_b > 0.0 && weight_b < 1.0)) {
    throw std::invalid_argument("weights must lie strictly inside (0,1)");
  }
  if (std::abs(weight_a + weight_b - 1.0) > 1e-12) {
    throw std::invalid_argument("weight_a + weight_b must equal 1");
  }
}

void PowerProfile::validate() const {
  require_positive(p_a, "p_a");
  require_positive(p_b, "p_b");
  require_positive(p_r, "p_r");
}

void PowerProfile::validate_against(const SystemParams& params) const {
  validate();
  if (p_a > params.peak_a || p_b > params.peak_b || p_r > params.peak_r) {
    throw std::invalid_argument("power profile exceeds a peak constraint");
  }
}

NormalizedSnrs normalized_snrs(const SystemParams& params,
                               const PowerProfile& powers) {
  params.validate();
  powers.validate();
  return {powers.p_a / params.sigma2_r, powers.p_b / params.sigma2_r,
          powers.p_r / params.sigma2_a, powers.p_r / params.sigma2_b};
}

double instantaneous_snr(const NormalizedSnrs& snrs, double gain_dest,
                         double gain_src, Source dest) {
  if (gain_dest < 0.0 || gain_src < 0.0) {
    throw std::domain_error("channel power gains must be nonnegative");
  }
  const bool to_a = dest == Source::A;
  const double g_relay = to_a ? snrs.gamma_ra : snrs.gamma_rb;
  const double g_own = to_a ? snrs.gamma_a : snrs.gamma_b;
  const double g_other = to_a ? snrs.gamma_b : snrs.gamma_a;
  const double num = g_relay * g_other * gain_dest * gain_src;
  const double den = (g_relay + g_own) * gain_dest + g_other * gain_src + 1.0;
  return num / den;
}

namespace {

// High-SNR success probability of the link into `dest`, written in powers:
// 1 - gamma_th * [sigma2_r/p_src + (sigma2_dest/p_r) * (1 + p_dest/p_src)].
double asymptotic_success_one(double gamma_th, double sigma2_r,
                              double sigma2_dest, double p_dest, double p_src,
                              double p_r) {
  return 1.0 - gamma_th * (sigma2_r / p_src +
                           sigma2_dest / p_r * (1.0 + p_dest / p_src));
}

}  // namespace

SuccessPair asymptotic_success(const SystemParams& params,
                               const PowerProfile& powers) {
  params.validate();
  powers.validate();
  SuccessPair pair;
  pair.kind = SuccessKind::asymptotic;
  pair.f_a = asymptotic_success_one(params.gamma_th, params.sigma2_r,
                                    params.sigma2_a, powers.p_a, powers.p_b,
                                    powers.p_r);
  pair.f_b = asymptotic_success_one(params.gamma_th, params.sigma2_r,
                                    params.sigma2_b, powers.p_b, powers.p_a,
                                    powers.p_r);
  return pair;
}

bool SuccessPair::valid_a() const {
  if (kind == SuccessKind::empirical) return f_a >= 0.0 && f_a <= 1.0;
  return f_a > 0.0 && f_a < 1.0;
}

bool SuccessPair::valid_b() const {
  if (kind == SuccessKind::empirical) return f_b >= 0.0 && f_b <= 1.0;
  return f_b > 0.0 && f_b < 1.0;
}

double aoi_per_source(double f) {
  if (!(f > 0.0) || f > 1.0) {
    throw std::domain_error("success probability must lie in (0,1]");
  }
  return 0.5 + 2.0 / f;
}

AoiSummary weighted_sum_aoi(const SystemParams& params,
                            const SuccessPair& pair) {
  params.validate();
  AoiSummary s;
  s.aoi_a = aoi_per_source(pair.f_a);
  s.aoi_b = aoi_per_source(pair.f_b);
  s.weighted = params.weight_a * s.aoi_a + params.weight_b * s.aoi_b;
  return s;
}

double success_a_pinned(const SystemParams& params, double p_a, double p_b) {
  return asymptotic_success_one(params.gamma_th, params.sigma2_r,
                                params.sigma2_a, p_a, p_b, params.peak_r);
}

double success_b_pinned(const SystemParams& params, double p_a, double p_b) {
  return asymptotic_success_one(params.gamma_th, params.sigma2_r,
                                params.sigma2_b, p_b, p_a, params.peak_r);
}

std::optional<double> objective_f(const SystemParams& params, double p_a,
                                  double p_b, double min_success) {
  if (!(p_a > 0.0) || !(p_b > 0.0)) {
    throw std::domain_error("powers must be positive");
  }
  const double f_a = success_a_pinned(params, p_a, p_b);
  const double f_b = success_b_pinned(params, p_a, p_b);
  if (!(f_a > min_success && f_a < 1.0 && f_b > min_success && f_b < 1.0)) {
    return std::nullopt;
  }
  return 2.0 * (params.weight_a / f_a + params.weight_b / f_b);
}

}  // namespace twraoi
