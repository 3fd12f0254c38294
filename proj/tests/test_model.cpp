#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "twraoi/model.hpp"
#include "twraoi/rng.hpp"
#include "test_util.hpp"

using namespace twraoi;
using test::paper_params;
using test::paper_powers;

TEST_CASE("normalized SNRs are the defining power ratios") {
  const SystemParams p = paper_params();
  const PowerProfile powers = paper_powers();
  const NormalizedSnrs snrs = normalized_snrs(p, powers);
  CHECK(snrs.gamma_a == doctest::Approx(1000.0).epsilon(1e-12));
  CHECK(snrs.gamma_b == doctest::Approx(1196.0).epsilon(1e-12));
  CHECK(snrs.gamma_ra == doctest::Approx(750.0).epsilon(1e-12));
  CHECK(snrs.gamma_rb == doctest::Approx(750.0).epsilon(1e-12));
}

TEST_CASE("non-positive inputs are rejected") {
  SystemParams p = paper_params();
  PowerProfile powers = paper_powers();
  powers.p_a = 0.0;
  CHECK_THROWS_AS(normalized_snrs(p, powers), std::invalid_argument);
  powers = paper_powers();
  p.sigma2_r = -1.0;
  CHECK_THROWS_AS(normalized_snrs(p, powers), std::invalid_argument);
  p = paper_params();
  p.weight_a = 0.7;  // weights no longer sum to 1
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}

TEST_CASE("end-to-end SNR at the reference gains") {
  const NormalizedSnrs snrs =
      normalized_snrs(paper_params(), paper_powers());
  // 750 * 1196 * 1 * 1 / (1750 + 1196 + 1), evaluated by hand.
  CHECK(instantaneous_snr(snrs, 1.0, 1.0, Source::A) ==
        doctest::Approx(897000.0 / 2947.0).epsilon(1e-12));
  CHECK(instantaneous_snr(snrs, 0.0, 5.0, Source::A) == 0.0);
  CHECK(instantaneous_snr(snrs, 5.0, 0.0, Source::B) == 0.0);
  CHECK_THROWS_AS(instantaneous_snr(snrs, -1.0, 1.0, Source::A),
                  std::domain_error);
}

TEST_CASE("end-to-end SNR grows in each gain and saturates") {
  const NormalizedSnrs snrs =
      normalized_snrs(paper_params(), paper_powers());
  Rng rng(101);
  for (int i = 0; i < 200; ++i) {
    const double x = rng.uniform(1e-3, 20.0);
    const double y = rng.uniform(1e-3, 20.0);
    const double h = 1e-6 * (1.0 + x);
    const double base = instantaneous_snr(snrs, x, y, Source::A);
    CHECK(instantaneous_snr(snrs, x + h, y, Source::A) > base);
    CHECK(instantaneous_snr(snrs, x, y + h, Source::A) > base);
  }
  // One-variable limit: with the other gain fixed the SNR increases toward a
  // finite asymptote below gamma_ra * gain.
  const double y0 = 100.0;
  const double cap = snrs.gamma_ra * snrs.gamma_b * y0 /
                     (snrs.gamma_ra + snrs.gamma_a);
  double prev = 0.0;
  for (const double x : {1.0, 10.0, 100.0, 1e4, 1e6}) {
    const double v = instantaneous_snr(snrs, x, y0, Source::A);
    CHECK(v > prev);
    CHECK(v < cap);
    prev = v;
  }
  CHECK(instantaneous_snr(snrs, 100.0, 100.0, Source::A) <
        snrs.gamma_ra * 100.0);
}

TEST_CASE("asymptotic success at the reference operating point") {
  const SuccessPair pair = asymptotic_success(paper_params(), paper_powers());
  // Direct evaluation of the power form.
  const double expect_a =
      1.0 - 100.0 * (0.001 / 1.196 + 0.001 / 0.75 * (1.0 + 1.0 / 1.196));
  const double expect_b =
      1.0 - 100.0 * (0.001 / 1.0 + 0.001 / 0.75 * (1.0 + 1.196 / 1.0));
  CHECK(pair.f_a == doctest::Approx(expect_a).epsilon(1e-14));
  CHECK(pair.f_b == doctest::Approx(expect_b).epsilon(1e-14));
  CHECK(pair.f_a == doctest::Approx(0.67157).epsilon(1e-5));
  CHECK(pair.f_b == doctest::Approx(0.60720).epsilon(1e-5));
  CHECK(pair.valid());
}

TEST_CASE("asymptotic success agrees with the normalized-SNR form") {
  Rng rng(17);
  const SystemParams p = paper_params();
  for (int i = 0; i < 100; ++i) {
    const PowerProfile powers{rng.uniform(0.1, 3.0), rng.uniform(0.1, 3.0),
                              rng.uniform(0.1, 3.0)};
    const SuccessPair pair = asymptotic_success(p, powers);
    const NormalizedSnrs s = normalized_snrs(p, powers);
    const double alt_a = 1.0 - p.gamma_th * (s.gamma_ra + s.gamma_a + s.gamma_b) /
                                   (s.gamma_ra * s.gamma_b);
    const double alt_b = 1.0 - p.gamma_th * (s.gamma_rb + s.gamma_b + s.gamma_a) /
                                   (s.gamma_rb * s.gamma_a);
    CHECK(pair.f_a == doctest::Approx(alt_a).epsilon(1e-10));
    CHECK(pair.f_b == doctest::Approx(alt_b).epsilon(1e-10));
  }
}

TEST_CASE("asymptotic success flags out-of-range values instead of throwing") {
  const SystemParams p = paper_params();
  const SuccessPair low = asymptotic_success(p, {1.0, 0.1, 0.75});
  // Direct evaluation: 1 - 100*(0.001/0.1 + (0.001/0.75)*(1 + 10)).
  CHECK(low.f_a ==
        doctest::Approx(1.0 - 100.0 * (0.01 + 0.001 / 0.75 * 11.0))
            .epsilon(1e-12));
  CHECK(low.f_a < 0.0);
  CHECK_FALSE(low.valid_a());

  const SuccessPair high = asymptotic_success(p, {1.0, 1e7, 1e7});
  CHECK(high.f_a > 0.999);
  CHECK(high.f_a < 1.0);
  CHECK(high.valid_a());
}

TEST_CASE("asymptotic success is monotone in each power") {
  Rng rng(23);
  const SystemParams p = paper_params();
  for (int i = 0; i < 100; ++i) {
    const double p_a = rng.uniform(0.2, 2.0);
    const double p_b = rng.uniform(0.2, 2.0);
    const double p_r = rng.uniform(0.2, 2.0);
    const double bump = rng.uniform(0.01, 0.5);
    const double f = asymptotic_success(p, {p_a, p_b, p_r}).f_a;
    CHECK(asymptotic_success(p, {p_a, p_b + bump, p_r}).f_a > f);
    CHECK(asymptotic_success(p, {p_a, p_b, p_r + bump}).f_a > f);
    CHECK(asymptotic_success(p, {p_a + bump, p_b, p_r}).f_a < f);
  }
}

TEST_CASE("per-source age: anchors and monotonicity") {
  CHECK(aoi_per_source(1.0) == 2.5);
  CHECK(aoi_per_source(0.5) == 4.5);
  const double f = 1.0 - 100.0 * (0.001 / 1.196 +
                                  0.001 / 0.75 * (1.0 + 1.0 / 1.196));
  CHECK(aoi_per_source(f) == doctest::Approx(3.4780).epsilon(1e-4));
  CHECK_THROWS_AS(aoi_per_source(0.0), std::domain_error);
  CHECK_THROWS_AS(aoi_per_source(-0.2), std::domain_error);
  CHECK_THROWS_AS(aoi_per_source(1.0 + 1e-9), std::domain_error);

  Rng rng(31);
  for (int i = 0; i < 200; ++i) {
    const double f1 = rng.uniform(1e-3, 1.0);
    const double f2 = rng.uniform(1e-3, 1.0);
    if (f1 == f2) continue;
    const bool ordered = (f1 < f2);
    CHECK((aoi_per_source(f1) > aoi_per_source(f2)) == ordered);
  }
}

TEST_CASE("weighted-sum age: anchors and the two computation routes") {
  SystemParams p = paper_params();
  SuccessPair ones{1.0, 1.0, SuccessKind::empirical};
  CHECK(weighted_sum_aoi(p, ones).weighted == 2.5);

  const SuccessPair pair = asymptotic_success(p, paper_powers());
  const AoiSummary s = weighted_sum_aoi(p, pair);
  CHECK(s.weighted == doctest::Approx(3.636).epsilon(2e-4));
  CHECK(s.aoi_a >= 2.5);
  CHECK(s.aoi_b >= 2.5);

  p.weight_a = 0.9;
  p.weight_b = 0.1;
  SuccessPair halves{0.5, 0.5, SuccessKind::empirical};
  CHECK(weighted_sum_aoi(p, halves).weighted ==
        doctest::Approx(4.5).epsilon(1e-14));

  // Convex combination equals the expanded form.
  Rng rng(37);
  for (int i = 0; i < 100; ++i) {
    SystemParams q = paper_params();
    q.weight_a = rng.uniform(0.05, 0.95);
    q.weight_b = 1.0 - q.weight_a;
    SuccessPair f{rng.uniform(0.01, 1.0), rng.uniform(0.01, 1.0),
                  SuccessKind::empirical};
    const AoiSummary sum = weighted_sum_aoi(q, f);
    const double expanded = 0.5 * (q.weight_a + q.weight_b) +
                            2.0 * (q.weight_a / f.f_a + q.weight_b / f.f_b);
    CHECK(std::abs(sum.weighted - expanded) <= 1e-12 * expanded);
    CHECK(std::abs(sum.weighted - (q.weight_a * aoi_per_source(f.f_a) +
                                   q.weight_b * aoi_per_source(f.f_b))) <=
          1e-12 * sum.weighted);
  }

  SuccessPair bad{0.0, 0.5, SuccessKind::empirical};
  CHECK_THROWS_AS(weighted_sum_aoi(paper_params(), bad), std::domain_error);
}

TEST_CASE("pinned-relay objective") {
  const SystemParams p = paper_params();
  const auto obj = objective_f(p, 1.0, 1.196);
  REQUIRE(obj.has_value());
  // Minimum weighted age minus its constant 1/2 term.
  CHECK(*obj == doctest::Approx(3.136).epsilon(2e-4));
  const AoiSummary s =
      weighted_sum_aoi(p, asymptotic_success(p, {1.0, 1.196, p.peak_r}));
  CHECK(0.5 + *obj == doctest::Approx(s.weighted).epsilon(1e-14));

  CHECK_FALSE(objective_f(p, 0.05, 0.05).has_value());
  CHECK_THROWS_AS(objective_f(p, 0.0, 1.0), std::domain_error);

  // As both success probabilities approach 1 the objective approaches
  // 2*(weight_a + weight_b).
  SystemParams wide = p;
  wide.peak_r = 1e9;
  CHECK(*objective_f(wide, 1e8, 1e8) == doctest::Approx(2.0).epsilon(1e-4));
}

TEST_CASE("label-swap symmetry is exact") {
  Rng rng(41);
  for (int i = 0; i < 100; ++i) {
    SystemParams p = paper_params();
    p.sigma2_a = rng.uniform(1e-4, 1e-2);
    p.sigma2_b = rng.uniform(1e-4, 1e-2);
    p.weight_a = rng.uniform(0.1, 0.9);
    p.weight_b = 1.0 - p.weight_a;
    const PowerProfile powers{rng.uniform(0.1, 2.0), rng.uniform(0.1, 2.0),
                              rng.uniform(0.1, 2.0)};
    const SystemParams q = test::swapped_labels(p);
    const PowerProfile swapped{powers.p_b, powers.p_a, powers.p_r};

    const SuccessPair fp = asymptotic_success(p, powers);
    const SuccessPair fq = asymptotic_success(q, swapped);
    CHECK(fp.f_a == fq.f_b);
    CHECK(fp.f_b == fq.f_a);
    if (fp.valid()) {
      const AoiSummary sp = weighted_sum_aoi(p, fp);
      const AoiSummary sq = weighted_sum_aoi(q, fq);
      CHECK(sp.aoi_a == sq.aoi_b);
      CHECK(sp.aoi_b == sq.aoi_a);
    }
  }
}
