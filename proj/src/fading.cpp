#include "twraoi/fading.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>

#include "twraoi/parallel.hpp"

namespace twraoi {

namespace {

// One block per derived stream; counts summed in integers so that the merge
// is exact and independent of scheduling.
constexpr std::uint64_t kBlockSize = 1u << 16;

double ci_halfwidth_95(double p, std::uint64_t n) {
  return 1.96 * std::sqrt(p * (1.0 - p) / static_cast<double>(n));
}

struct PairCounts {
  std::uint64_t ok_a = 0;
  std::uint64_t ok_b = 0;
};

// Counts threshold successes for both destinations over all sample blocks.
PairCounts count_successes(const SystemParams& params,
                           const PowerProfile& powers, std::uint64_t n_samples,
                           std::uint64_t seed, unsigned n_threads) {
  const NormalizedSnrs snrs = normalized_snrs(params, powers);
  const double threshold = params.gamma_th;
  const std::uint64_t n_blocks = (n_samples + kBlockSize - 1) / kBlockSize;

  std::atomic<std::uint64_t> total_a{0};
  std::atomic<std::uint64_t> total_b{0};
  parallel_blocks(n_blocks, n_threads, [&](std::uint64_t block) {
    Rng rng(derive_seed(seed, block));
    const std::uint64_t begin = block * kBlockSize;
    const std::uint64_t end = std::min(begin + kBlockSize, n_samples);
    std::uint64_t ok_a = 0;
    std::uint64_t ok_b = 0;
    for (std::uint64_t i = begin; i < end; ++i) {
      const ChannelDraw draw = sample_channel_pair(rng);
      if (instantaneous_snr(snrs, draw.g_a, draw.g_b, Source::A) >= threshold) {
        ++ok_a;
      }
      if (instantaneous_snr(snrs, draw.g_b, draw.g_a, Source::B) >= threshold) {
        ++ok_b;
      }
    }
    total_a.fetch_add(ok_a, std::memory_order_relaxed);
    total_b.fetch_add(ok_b, std::memory_order_relaxed);
  });
  return {total_a.load(), total_b.load()};
}

}  // namespace

ChannelDraw sample_channel_pair(Rng& rng) {
  ChannelDraw draw;
  draw.g_a = rng.exponential();
  draw.g_b = rng.exponential();
  return draw;
}

EmpiricalSuccess empirical_success_probability(const SystemParams& params,
                                               const PowerProfile& powers,
                                               Source dest,
                                               std::uint64_t n_samples,
                                               std::uint64_t seed,
                                               unsigned n_threads) {
  if (n_samples == 0) {
    throw std::invalid_argument("n_samples must be at least 1");
  }
  const PairCounts counts =
      count_successes(params, powers, n_samples, seed, n_threads);
  const std::uint64_t ok = dest == Source::A ? counts.ok_a : counts.ok_b;
  EmpiricalSuccess result;
  result.estimate = static_cast<double>(ok) / static_cast<double>(n_samples);
  result.n_samples = n_samples;
  result.ci_halfwidth = ci_halfwidth_95(result.estimate, n_samples);
  result.seed = seed;
  return result;
}

SuccessPair empirical_success_pair(const SystemParams& params,
                                   const PowerProfile& powers,
                                   std::uint64_t n_samples, std::uint64_t seed,
                                   unsigned n_threads) {
  if (n_samples == 0) {
    throw std::invalid_argument("n_samples must be at least 1");
  }
  const PairCounts counts =
      count_successes(params, powers, n_samples, seed, n_threads);
  SuccessPair pair;
  pair.kind = SuccessKind::empirical;
  pair.f_a = static_cast<double>(counts.ok_a) / static_cast<double>(n_samples);
  pair.f_b = static_cast<double>(counts.ok_b) / static_cast<double>(n_samples);
  pair.ci_halfwidth_a = ci_halfwidth_95(pair.f_a, n_samples);
  pair.ci_halfwidth_b = ci_halfwidth_95(pair.f_b, n_samples);
  return pair;
}

}  // namespace twraoi
