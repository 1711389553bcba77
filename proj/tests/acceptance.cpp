// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include <pairstat/characterization.hpp>
#include <pairstat/detection_statistics.hpp>
#include <pairstat/monte_carlo.hpp>

using namespace pairstat;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  const char* title;
  double time_limit_s;
  std::function<Outcome()> check;
};

std::string fmt(const char* f, double a) {
  char buf[96];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

const ChannelTransmissions kLabEta(0.1212, 0.0145, 0.0162);
const DarkCountRates kLabDarks(2.5e-7, 2.87e-4, 3.84e-4);
constexpr double kLabMu = 0.02375;
constexpr auto kPoisson = PairDistributionKind::poisson;
constexpr auto kThermal = PairDistributionKind::thermal;

MeasuredProbabilities noiseless(const SetupModel& setup, double mu) {
  TruncationOptions t;
  t.tail_tol = 1e-16;
  const auto m = marginals(
      detection_statistics(PairDistribution(kPoisson, mu), setup, t));
  MeasuredProbabilities out;
  out.p_h = m.p_h;
  out.p_a = m.p_a;
  out.p_b = m.p_b;
  out.p_ah = m.p_ah;
  out.p_bh = m.p_bh;
  out.p_ab = m.p_ab;
  out.p_abh = m.p_abh;
  out.n_windows = 1'000'000'000'000ULL;
  return out;
}

Outcome brightness_bound() {
  const auto b = brightness_upper_bound(20.6, {0.60, 0.25, 0.25}, kLabDarks,
                                        kPoisson);
  return {b.mu_max >= 0.0467 && b.mu_max <= 0.0493,
          fmt("mu_max = %.5f", b.mu_max) + fmt(", r_min = %.2f", b.r_min)};
}

Outcome multipair_ratios() {
  const double r1 = multipair_ratio(PairDistribution(kPoisson, 0.02375));
  const double r2 = multipair_ratio(PairDistribution(kPoisson, 0.0480));
  return {r1 >= 82.9 && r1 <= 84.1 && r2 >= 38.8 && r2 <= 43.2,
          fmt("r(0.02375) = %.3f", r1) + fmt(", r(0.0480) = %.3f", r2)};
}

Outcome g_consistency() {
  const double g = correlation_strength(detection_statistics(
      PairDistribution(kPoisson, kLabMu), SetupModel(kLabEta, kLabDarks)));
  return {g >= 23.4 && g <= 24.4, fmt("G = %.4f", g)};
}

Outcome low_brightness_law() {
  const SetupModel setup(kLabEta, {});
  bool pass = true;
  std::string detail;
  for (double mu : {0.001, 0.005, 0.01}) {
    const double g2 = predict_g2(setup, PairDistribution(kPoisson, mu));
    const double rel =
        std::abs(g2 - g2_low_brightness_approx(mu, kLabEta.eta_h())) / g2;
    pass = pass && rel < 0.01;
    detail += fmt("mu=%g: ", mu) + fmt("rel.dev %.3f%%  ", 100 * rel);
  }
  return {pass, detail};
}

Outcome dark_count_limit() {
  const SetupModel setup(kLabEta, kLabDarks);
  const double dh = kLabDarks.d_h();
  const double g2_dark = predict_at_heralding(setup, kPoisson, 2 * dh).g2;
  const bool near_one = g2_dark >= 0.9 && g2_dark <= 1.1;

  const int n = 200;
  const double lo = std::log(10 * dh), hi = std::log(0.05);
  double last = -1, first_drop = 0;
  bool monotone = true;
  for (int i = 0; i < n; ++i) {
    const double ph = std::exp(lo + (hi - lo) * i / (n - 1));
    const double g2 = predict_at_heralding(setup, kPoisson, ph).g2;
    if (g2 <= last && monotone) {
      monotone = false;
      first_drop = ph;
    }
    last = g2;
  }
  std::string detail = fmt("g2(2 d_H) = %.4f", g2_dark);
  detail += monotone ? ", monotone on [10 d_H, 0.05]"
                     : fmt(", not monotone (first decrease at p_H = %.3g)",
                           first_drop);
  return {near_one && monotone, detail};
}

Outcome oracle_equivalence() {
  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> u(0, 1);
  int outliers = 0;
  for (int trial = 0; trial < 20; ++trial) {
    const double mu = std::exp(std::log(1e-3) + u(rng) * std::log(500.0));
    const double eta_h = u(rng);
    const double eta_a = u(rng);
    const double eta_b = u(rng) * (1 - eta_a);
    // Smallest c for which the no-detection probability stays >= 0.
    const double ab = eta_a + eta_b;
    const double c_min =
        std::max(0.05, (eta_h + ab - 1) / std::max(eta_h * ab, 1e-300));
    const SetupModel setup({eta_h, eta_a, eta_b},
                           {1e-2 * u(rng), 1e-2 * u(rng), 1e-2 * u(rng)},
                           c_min + (1 - c_min) * u(rng));
    const auto kind = trial % 2 ? kThermal : kPoisson;
    const PairDistribution dist(kind, mu);
    const std::uint64_t n = 1'000'000;
    const auto counts = simulate_windows(setup, dist, n, 1000 + trial);
    const auto p = detection_statistics(dist, setup);
    for (std::size_t k = 0; k < kOutcomeCount; ++k) {
      const double sigma = std::sqrt(p[k] * (1 - p[k]) / n);
      const double freq = static_cast<double>(counts.outcome_counts[k]) / n;
      if (std::abs(freq - p[k]) > 5 * sigma) ++outliers;
    }
  }
  return {outliers <= 2,
          std::to_string(outliers) + " of 160 entries beyond 5 sigma"};
}

Outcome round_trip() {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> u(0, 1);
  double worst = 0;
  for (int trial = 0; trial < 10; ++trial) {
    const ChannelTransmissions eta(0.05 + 0.9 * u(rng), 0.01 + 0.4 * u(rng),
                                   0.01 + 0.4 * u(rng));
    const double mu = 1e-4 + 1.9e-3 * u(rng);  // r = 2/mu >= 1e3
    const auto r = solve_transmissions(noiseless({eta, kLabDarks}, mu),
                                       kLabDarks, kPoisson);
    for (double e : {r.eta_h.value - eta.eta_h(), r.eta_a.value - eta.eta_a(),
                     r.eta_b.value - eta.eta_b(), r.mu.value - mu}) {
      worst = std::max(worst, std::abs(e));
    }
  }
  return {worst < 1e-6, fmt("max abs error %.2e", worst)};
}

Outcome c_laws() {
  const double c = 0.5;
  const double mu = 2e-3;
  const auto r = solve_transmissions(
      noiseless(SetupModel(kLabEta, kLabDarks, c), mu), kLabDarks, kPoisson);
  const auto scaled = kLabEta.scaled(c);
  double worst = 0;
  for (double e : {r.eta_h.value - scaled.eta_h(),
                   r.eta_a.value - scaled.eta_a(),
                   r.eta_b.value - scaled.eta_b(), r.mu.value - mu / c}) {
    worst = std::max(worst, std::abs(e));
  }

  double worst_g2 = 0;
  const SetupModel correlated(kLabEta, kLabDarks, c);
  const SetupModel plain(scaled, kLabDarks);
  for (double ph : {1e-5, 1e-4, 1e-3, 1e-2}) {
    const double a = predict_at_heralding(correlated, kPoisson, ph).g2;
    const double b = predict_at_heralding(plain, kPoisson, ph).g2;
    worst_g2 = std::max(worst_g2, std::abs(a - b));
  }
  for (double m : {1e-3, 1e-2, 0.1}) {
    const double a = predict_g2(correlated, PairDistribution(kPoisson, m));
    const double b = predict_g2(plain, PairDistribution(kPoisson, m / c));
    worst_g2 = std::max(worst_g2, std::abs(a - b));
  }
  return {worst < 1e-6 && worst_g2 < 1e-9,
          fmt("parameter error %.2e", worst) + fmt(", g2 difference %.2e",
                                                   worst_g2)};
}

Outcome thermal_ordering() {
  const SetupModel setup(kLabEta, kLabDarks);
  bool pass = true;
  double min_gap = 1e300;
  for (int i = 0; i < 10; ++i) {
    const double ph = std::exp(std::log(1e-5) + i * std::log(5e3) / 9);
    const double p = predict_at_heralding(setup, kPoisson, ph).g2;
    const double t = predict_at_heralding(setup, kThermal, ph).g2;
    pass = pass && t > p;
    min_gap = std::min(min_gap, t - p);
  }
  return {pass, fmt("smallest thermal - Poisson gap %.3e", min_gap)};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "brightness upper bound from G = 20.6", 5, brightness_bound},
      {2, "multi-pair ratio at mu = 0.02375 and 0.0480", 1, multipair_ratios},
      {3, "G at the characterization operating point", 1, g_consistency},
      {4, "low-brightness g2 law within 1%", 5, low_brightness_law},
      {5, "dark-count limit of g2(p_H)", 10, dark_count_limit},
      {6, "Monte Carlo agrees with the exact model", 120, oracle_equivalence},
      {7, "noiseless round-trip recovery within 1e-6", 10, round_trip},
      {8, "spectral-correlation scaling laws", 10, c_laws},
      {9, "thermal g2 exceeds Poisson g2", 10, thermal_ordering},
  };

  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(
                            std::chrono::steady_clock::now() - start)
                            .count();
    const bool in_time = secs < c.time_limit_s;
    const bool pass = o.pass && in_time;
    failures += pass ? 0 : 1;
    std::printf("%s  [%d] %s: %s (%.3f s, limit %g s%s)\n",
                pass ? "PASS" : "FAIL", c.id, c.title, o.detail.c_str(), secs,
                c.time_limit_s, in_time ? "" : ", too slow");
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n",
              static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
