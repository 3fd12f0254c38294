#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "twraoi/fading.hpp"
#include "test_util.hpp"

using namespace twraoi;
using test::paper_params;
using test::paper_powers;

TEST_CASE("channel draws follow the unit-mean exponential law") {
  Rng rng(2);
  const std::uint64_t n = 1'000'000;
  double sum = 0.0;
  std::uint64_t above_one = 0;
  for (std::uint64_t i = 0; i < n; ++i) {
    const ChannelDraw d = sample_channel_pair(rng);
    CHECK(d.g_a >= 0.0);
    CHECK(d.g_b >= 0.0);
    sum += d.g_a;
    if (d.g_a > 1.0) ++above_one;
  }
  const double mean = sum / static_cast<double>(n);
  CHECK(mean > 0.99);
  CHECK(mean < 1.01);
  const double tail = static_cast<double>(above_one) / static_cast<double>(n);
  CHECK(tail == doctest::Approx(std::exp(-1.0)).epsilon(0.006));
}

TEST_CASE("fixed seed reproduces the draw sequence") {
  Rng r1(99), r2(99);
  for (int i = 0; i < 1000; ++i) {
    const ChannelDraw a = sample_channel_pair(r1);
    const ChannelDraw b = sample_channel_pair(r2);
    CHECK(a.g_a == b.g_a);
    CHECK(a.g_b == b.g_b);
  }
}

TEST_CASE("estimate is deterministic and worker-count independent") {
  const auto one = empirical_success_probability(paper_params(),
                                                 paper_powers(), Source::A,
                                                 200'000, 7, 1);
  const auto two = empirical_success_probability(paper_params(),
                                                 paper_powers(), Source::A,
                                                 200'000, 7, 2);
  const auto four = empirical_success_probability(paper_params(),
                                                  paper_powers(), Source::A,
                                                  200'000, 7, 4);
  CHECK(one.estimate == two.estimate);
  CHECK(one.estimate == four.estimate);
  CHECK(one.ci_halfwidth == two.ci_halfwidth);
}

TEST_CASE("zero threshold always succeeds") {
  SystemParams p = paper_params();
  p.gamma_th = 0.0;
  const auto est = empirical_success_probability(p, paper_powers(), Source::A,
                                                 10'000, 3);
  CHECK(est.estimate == 1.0);
  const SuccessPair pair =
      empirical_success_pair(p, paper_powers(), 10'000, 3);
  CHECK(pair.f_a == 1.0);
  CHECK(pair.f_b == 1.0);
  CHECK(pair.kind == SuccessKind::empirical);
}

TEST_CASE("estimate is non-increasing in the threshold on fixed draws") {
  SystemParams p = paper_params();
  double prev = 1.1;
  for (const double g : {10.0, 50.0, 100.0, 200.0, 400.0}) {
    p.gamma_th = g;
    const auto est = empirical_success_probability(p, paper_powers(),
                                                   Source::A, 100'000, 11);
    CHECK(est.estimate <= prev);
    prev = est.estimate;
  }
}

TEST_CASE("confidence interval invariants") {
  const auto est = empirical_success_probability(paper_params(),
                                                 paper_powers(), Source::A,
                                                 100'000, 5);
  const double expect = 1.96 * std::sqrt(est.estimate * (1.0 - est.estimate) /
                                         static_cast<double>(est.n_samples));
  CHECK(est.ci_halfwidth == doctest::Approx(expect).epsilon(1e-12));
  CHECK(est.estimate >= 0.0);
  CHECK(est.estimate <= 1.0);
  CHECK(est.seed == 5);

  const auto doubled = empirical_success_probability(
      paper_params(), paper_powers(), Source::A, 200'000, 5);
  const double shrink = doubled.ci_halfwidth / est.ci_halfwidth;
  CHECK(shrink == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(0.05));
}

TEST_CASE("scaling all powers up cannot hurt any round") {
  const SystemParams p = paper_params();
  const PowerProfile base = paper_powers();
  const PowerProfile scaled{base.p_a * 10.0, base.p_b * 10.0, base.p_r * 10.0};
  const auto lo = empirical_success_probability(p, base, Source::A, 200'000, 13);
  const auto hi =
      empirical_success_probability(p, scaled, Source::A, 200'000, 13);
  CHECK(hi.estimate > lo.estimate);
}

TEST_CASE("symmetric system gives statistically equal links") {
  SystemParams p = paper_params();
  const PowerProfile powers{1.0, 1.0, 0.75};
  const SuccessPair pair = empirical_success_pair(p, powers, 400'000, 19);
  CHECK(std::abs(pair.f_a - pair.f_b) <
        3.0 * (pair.ci_halfwidth_a + pair.ci_halfwidth_b));
}

TEST_CASE("empirical estimate tracks the asymptotic value at high SNR") {
  const SuccessPair emp =
      empirical_success_pair(paper_params(), paper_powers(), 1'000'000, 29);
  const SuccessPair asym = asymptotic_success(paper_params(), paper_powers());
  REQUIRE(asym.f_a > 0.5);
  REQUIRE(asym.f_b > 0.5);
  CHECK(std::abs(emp.f_a - asym.f_a) <= 0.05);
  CHECK(std::abs(emp.f_b - asym.f_b) <= 0.05);
}

TEST_CASE("sample-count precondition") {
  CHECK_THROWS_AS(empirical_success_probability(paper_params(), paper_powers(),
                                                Source::A, 0, 1),
                  std::invalid_argument);
}
