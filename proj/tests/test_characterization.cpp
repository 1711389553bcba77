#include <doctest.h>

#include <cmath>
#include <random>

#include <pairstat/characterization.hpp>
#include <pairstat/error.hpp>

#include "oracle.hpp"
#include "support.hpp"

using namespace pairstat;
using testing::kLabMu;
using testing::kLabSetup;

namespace {

MeasuredProbabilities forward(const oracle::Setup& s, PairDistributionKind kind,
                              double mu) {
  TruncationOptions t;
  t.tail_tol = 1e-16;
  return testing::noiseless(
      detection_statistics(PairDistribution(kind, mu), testing::model_of(s), t));
}

}  // namespace

TEST_SUITE("characterization") {
  TEST_CASE("dark-count correction") {
    CHECK(dark_count_corrected(0.1, 0.0).value == 0.1);
    CHECK(dark_count_corrected(0.5, 0.5).value == 0.0);
    CHECK(dark_count_corrected(0.55, 0.1).value == doctest::Approx(0.5));
    const auto clamped = dark_count_corrected(0.09, 0.1, 100);
    CHECK(clamped.clamped);
    CHECK_FALSE(clamped.implausible);
    CHECK(dark_count_corrected(0.09, 0.1, 1'000'000).implausible);
    CHECK_THROWS_AS(dark_count_corrected(1.2, 0.1), InvalidArgument);
  }

  TEST_CASE("brightness from single-pair probability") {
    using K = PairDistributionKind;
    CHECK(brightness_from_p1(K::poisson, 0.0) == 0.0);
    for (double mu : {1e-6, 1e-3, 0.02375, 0.5, 0.999}) {
      const double p1 = PairDistribution(K::poisson, mu).p1();
      CHECK(brightness_from_p1(K::poisson, p1) ==
            doctest::Approx(mu).epsilon(1e-9));
      const double p1t = PairDistribution(K::thermal, mu * 0.8).p1();
      CHECK(brightness_from_p1(K::thermal, p1t) ==
            doctest::Approx(mu * 0.8).epsilon(1e-9));
    }
    CHECK(brightness_from_p1(K::poisson, std::exp(-1.0)) ==
          doctest::Approx(1.0).epsilon(1e-6));
    CHECK_THROWS_AS(brightness_from_p1(K::poisson, 0.4), NumericalError);
    CHECK_THROWS_AS(brightness_from_p1(K::thermal, 0.26), NumericalError);
  }

  TEST_CASE("multi-pair ratio") {
    using K = PairDistributionKind;
    CHECK(multipair_ratio(PairDistribution(K::poisson, kLabMu)) ==
          doctest::Approx(83.5).epsilon(0.005));
    CHECK(multipair_ratio(PairDistribution(K::poisson, 0.048)) ==
          doctest::Approx(41.0).epsilon(0.01));
    // Poisson r -> 2/mu; thermal r = (1 - x)/x with x = tanh^2 mu.
    CHECK(multipair_ratio(PairDistribution(K::poisson, 1e-4)) ==
          doctest::Approx(2e4).epsilon(1e-3));
    const PairDistribution t(K::thermal, 0.1);
    CHECK(multipair_ratio(t) ==
          doctest::Approx((1 - t.thermal_ratio()) / t.thermal_ratio()));
    CHECK(std::isinf(multipair_ratio(PairDistribution(K::poisson, 0.0))));
  }

  TEST_CASE("solve recovers noiseless parameters") {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> u(0, 1);
    for (auto kind :
         {PairDistributionKind::poisson, PairDistributionKind::thermal}) {
      for (int trial = 0; trial < 10; ++trial) {
        oracle::Setup s = kLabSetup;
        s.eta_h = 0.05 + 0.6 * u(rng);
        s.eta_a = 0.01 + 0.3 * u(rng);
        s.eta_b = 0.01 + 0.3 * u(rng);
        const double mu = 1e-4 + 5e-3 * u(rng);
        const auto r = solve_transmissions(forward(s, kind, mu),
                                           {s.d_h, s.d_a, s.d_b}, kind);
        CHECK(r.eta_h.value == doctest::Approx(s.eta_h).epsilon(1e-7));
        CHECK(r.eta_a.value == doctest::Approx(s.eta_a).epsilon(1e-7));
        CHECK(r.eta_b.value == doctest::Approx(s.eta_b).epsilon(1e-7));
        CHECK(r.mu.value == doctest::Approx(mu).epsilon(1e-7));
        CHECK(r.warnings.empty());
      }
    }
  }

  TEST_CASE("closed form is biased by multi-pair events, the fit is not") {
    const auto m = forward(kLabSetup, PairDistributionKind::poisson, kLabMu);
    const auto r = solve_transmissions(
        m, {kLabSetup.d_h, kLabSetup.d_a, kLabSetup.d_b},
        PairDistributionKind::poisson);
    const double cf_err =
        std::abs(r.closed_form.eta_a - kLabSetup.eta_a) / kLabSetup.eta_a;
    CHECK(cf_err > 1e-3);
    CHECK(cf_err < 0.05);
    CHECK(r.eta_a.value == doctest::Approx(kLabSetup.eta_a).epsilon(1e-8));
    CHECK(std::abs(r.closed_form.p1_discrepancy) < 1e-3 * r.closed_form.p1);
  }

  TEST_CASE("c < 1 data maps onto scaled transmissions and brightness") {
    oracle::Setup s = kLabSetup;
    s.c = 0.5;
    const auto r = solve_transmissions(forward(s, PairDistributionKind::poisson, 2e-3),
                                       {s.d_h, s.d_a, s.d_b},
                                       PairDistributionKind::poisson);
    CHECK(r.eta_h.value == doctest::Approx(0.5 * s.eta_h).epsilon(1e-7));
    CHECK(r.eta_a.value == doctest::Approx(0.5 * s.eta_a).epsilon(1e-7));
    CHECK(r.mu.value == doctest::Approx(4e-3).epsilon(1e-7));
  }

  TEST_CASE("multi-pair contamination is flagged") {
    const DarkCountRates d{kLabSetup.d_h, kLabSetup.d_a, kLabSetup.d_b};
    // r ~ 2/mu: mu = 0.07 is between the warn and fail levels.
    const auto warned = solve_transmissions(
        forward(kLabSetup, PairDistributionKind::poisson, 0.07), d,
        PairDistributionKind::poisson);
    CHECK(warned.r.value < 40);
    CHECK_FALSE(warned.warnings.empty());
    SolveOptions strict;
    strict.strict = true;
    CHECK_THROWS_AS(
        solve_transmissions(forward(kLabSetup, PairDistributionKind::poisson, 0.07),
                            d, PairDistributionKind::poisson, strict),
        ConsistencyError);
    CHECK_THROWS_AS(
        solve_transmissions(forward(kLabSetup, PairDistributionKind::poisson, 0.3),
                            d, PairDistributionKind::poisson),
        ConsistencyError);
  }

  TEST_CASE("A and B disagreement is a warning, or an error when strict") {
    auto m = forward(kLabSetup, PairDistributionKind::poisson, 5e-3);
    m.n_windows = 10'000'000'000ULL;
    m.p_bh *= 1.2;  // B coincidences inconsistent with the rest
    const DarkCountRates d{kLabSetup.d_h, kLabSetup.d_a, kLabSetup.d_b};
    const auto r = solve_transmissions(m, d, PairDistributionKind::poisson);
    CHECK(r.fit_chi2 > 25);
    CHECK_FALSE(r.warnings.empty());
    SolveOptions strict;
    strict.strict = true;
    CHECK_THROWS_AS(
        solve_transmissions(m, d, PairDistributionKind::poisson, strict),
        ConsistencyError);
  }

  TEST_CASE("undefined inputs are numerical errors") {
    MeasuredProbabilities m;
    m.p_h = 1e-3;
    m.p_a = 1e-4;
    m.p_b = 1e-4;
    m.n_windows = 1000000;
    CHECK_THROWS_AS(solve_transmissions(m, {}, PairDistributionKind::poisson),
                    NumericalError);
  }

  TEST_CASE("brightness upper bound from G") {
    const auto b = brightness_upper_bound(
        20.6, {0.6, 0.25, 0.25}, {2.5e-7, 2.87e-4, 3.84e-4},
        PairDistributionKind::poisson);
    CHECK(b.mu_max == doctest::Approx(0.048995).epsilon(1e-4));
    CHECK(b.r_min == doctest::Approx(multipair_ratio(PairDistribution(
                         PairDistributionKind::poisson, b.mu_max))));
    CHECK(b.g_peak == doctest::Approx(839.57).epsilon(1e-4));
    CHECK_FALSE(b.saturated);
    // The curve passes through g_measured at mu_max.
    const double g = correlation_strength(detection_statistics(
        PairDistribution(PairDistributionKind::poisson, b.mu_max),
        SetupModel({0.6, 0.25, 0.25}, {2.5e-7, 2.87e-4, 3.84e-4})));
    CHECK(g == doctest::Approx(20.6).epsilon(1e-8));
    CHECK_THROWS_AS(brightness_upper_bound(1e4, {0.6, 0.25, 0.25},
                                           {2.5e-7, 2.87e-4, 3.84e-4},
                                           PairDistributionKind::poisson),
                    NumericalError);
    CHECK_THROWS_AS(brightness_upper_bound(0.5, {0.6, 0.25, 0.25}, {},
                                           PairDistributionKind::poisson),
                    InvalidArgument);
  }

  TEST_CASE("brightness bound with true transmissions") {
    const auto m = forward(kLabSetup, PairDistributionKind::poisson, kLabMu);
    const double g = m.p_ah / (m.p_a * m.p_h);
    const auto b = brightness_upper_bound(
        g, {kLabSetup.eta_h, kLabSetup.eta_a, kLabSetup.eta_b},
        {kLabSetup.d_h, kLabSetup.d_a, kLabSetup.d_b},
        PairDistributionKind::poisson);
    CHECK(b.mu_max == doctest::Approx(kLabMu).epsilon(1e-7));
    // Detector efficiencies over-estimate the transmissions; with darks
    // this over-estimates the brightness.
    const auto loose = brightness_upper_bound(
        g, {0.6, 0.25, 0.25}, {kLabSetup.d_h, kLabSetup.d_a, kLabSetup.d_b},
        PairDistributionKind::poisson);
    CHECK(loose.mu_max > kLabMu);
  }

  TEST_CASE("heralding probability inverts to brightness") {
    const auto setup = testing::model_of(kLabSetup);
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> log_p(std::log(1e-6),
                                                  std::log(0.1));
    for (auto kind :
         {PairDistributionKind::poisson, PairDistributionKind::thermal}) {
      for (int trial = 0; trial < 100; ++trial) {
        const double target = std::exp(log_p(rng));
        const double mu = brightness_from_heralding(setup, kind, target);
        CHECK(heralding_probability(setup, PairDistribution(kind, mu)) ==
              doctest::Approx(target).epsilon(1e-10));
      }
    }
    CHECK(brightness_from_heralding(setup, PairDistributionKind::poisson,
                                    kLabSetup.d_h) == 0.0);
    CHECK_THROWS_AS(brightness_from_heralding(
                        setup, PairDistributionKind::poisson, 1e-8),
                    NumericalError);
    CHECK_THROWS_AS(brightness_from_heralding(
                        setup, PairDistributionKind::poisson, 1.0),
                    NumericalError);
    const SetupModel blind({0.0, 0.1, 0.1}, {1e-6, 0, 0});
    CHECK_THROWS_AS(brightness_from_heralding(
                        blind, PairDistributionKind::poisson, 1e-3),
                    NumericalError);
  }

  TEST_CASE("low-brightness g2 approaches mu (2 - eta_H)") {
    oracle::Setup s = kLabSetup;
    s.d_h = s.d_a = s.d_b = 0;
    const auto setup = testing::model_of(s);
    for (double mu : {1e-5, 1e-4, 1e-3}) {
      const double g2 =
          predict_g2(setup, PairDistribution(PairDistributionKind::poisson, mu));
      const double approx = g2_low_brightness_approx(mu, s.eta_h);
      CHECK(std::abs(g2 - approx) / g2 < 2 * mu);
    }
  }

  TEST_CASE("g2 tends to one as heralds become pure dark counts") {
    const auto setup = testing::model_of(kLabSetup);
    const auto near = predict_at_heralding(setup, PairDistributionKind::poisson,
                                           kLabSetup.d_h * 1.001);
    CHECK(near.g2 == doctest::Approx(1.0).epsilon(0.02));
    double last = 0;
    for (double ph = 1e-4; ph <= 0.05; ph *= 1.5) {
      const double g2 =
          predict_at_heralding(setup, PairDistributionKind::poisson, ph).g2;
      CHECK(g2 > last);
      last = g2;
    }
  }

  TEST_CASE("thermal pairs give a larger g2 than Poisson pairs") {
    const auto setup = testing::model_of(kLabSetup);
    for (double ph = 1e-5; ph < 0.05; ph *= 3) {
      const auto p = predict_at_heralding(setup, PairDistributionKind::poisson, ph);
      const auto t = predict_at_heralding(setup, PairDistributionKind::thermal, ph);
      CHECK(t.g2 > p.g2);
    }
  }

  TEST_CASE("g2 at fixed heralding is the same for equivalent c setups") {
    oracle::Setup s = kLabSetup;
    s.c = 0.5;
    oracle::Setup scaled = kLabSetup;
    scaled.eta_h *= 0.5;
    scaled.eta_a *= 0.5;
    scaled.eta_b *= 0.5;
    for (auto kind :
         {PairDistributionKind::poisson, PairDistributionKind::thermal}) {
      for (double ph : {1e-4, 1e-3, 1e-2}) {
        const auto a = predict_at_heralding(testing::model_of(s), kind, ph);
        const auto b = predict_at_heralding(testing::model_of(scaled), kind, ph);
        CHECK(a.g2 == doctest::Approx(b.g2).epsilon(1e-9));
      }
    }
  }
}
