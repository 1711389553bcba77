#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>

#include "pairstat/counts.hpp"
#include "pairstat/pair_distribution.hpp"
#include "pairstat/types.hpp"

namespace pairstat {

struct SimulationOptions {
  /// Cap on pairs per window; 1 gives the ideal single-pair source.
  std::optional<std::uint64_t> max_pairs_per_window;
  /// Windows per RNG stream. Changing it changes the sampled sequence.
  std::uint64_t batch_size = 1u << 16;
  /// 0 = hardware concurrency. Results do not depend on it.
  unsigned threads = 0;
};

/*
 * Draws the click outcome of one window by brute force: pair count from the
 * distribution, an independent fate for every pair, then independent dark
 * counts on each detector.
 *
 * Per pair the far photon goes to A with probability eta_a, to B with eta_b,
 * or is lost; the herald photon is then detected with probability c*eta_h if
 * the far photon was detected and with the complementary probability
 * eta_h(1 - c(eta_a + eta_b)) / (1 - eta_a - eta_b) otherwise, which keeps the
 * H marginal at eta_h and the coincidences at c*eta_h*eta_x.
 */
class WindowSampler {
 public:
  WindowSampler(const SetupModel& setup, const PairDistribution& dist,
                std::optional<std::uint64_t> max_pairs = std::nullopt);

  /// Not thread-safe; use one sampler per stream.
  DetectorOutcome operator()(std::mt19937_64& rng);

 private:
  std::uint64_t draw_pairs(std::mt19937_64& rng);

  PairDistribution dist_;
  std::optional<std::uint64_t> max_pairs_;
  std::poisson_distribution<long long> poisson_;
  std::geometric_distribution<long long> geometric_;
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
  // Cumulative per-pair thresholds over HA, HB, H, A, B (rest: nothing).
  std::array<double, 5> cumulative_{};
  double d_h_, d_a_, d_b_;
};

/// Calls `visit` once per window, in window order; same sequence as
/// simulate_windows for equal arguments.
void for_each_window(const SetupModel& setup, const PairDistribution& dist,
                     std::uint64_t n_windows, std::uint64_t seed,
                     const std::function<void(DetectorOutcome)>& visit,
                     const SimulationOptions& options = {});

/// Outcome histogram of n_windows simulated windows. Deterministic in seed.
ClickCounts simulate_windows(const SetupModel& setup,
                             const PairDistribution& dist,
                             std::uint64_t n_windows, std::uint64_t seed,
                             const SimulationOptions& options = {});

struct G2SimulationOptions {
  /// false: g2 = p_AB / (p_A p_B) over all windows, n = windows.
  bool heralded = true;
  std::uint64_t max_windows = 10'000'000'000ULL;
  SimulationOptions simulation;
};

struct G2Estimate {
  double g2 = 0.0;
  /// First-order binomial propagation; numerator/denominator correlations
  /// are ignored.
  double std_error = 0.0;
  std::uint64_t n_conditioning = 0;  // heralds (or windows if unheralded)
  std::uint64_t n_windows = 0;
  std::uint64_t n_a = 0;
  std::uint64_t n_b = 0;
  std::uint64_t n_ab = 0;
};

/// Collects n_heralds H-clicked windows and forms p_AB|H / (p_A|H p_B|H).
/// Throws NumericalError when max_windows runs out first.
G2Estimate simulate_heralded_g2(const SetupModel& setup,
                                const PairDistribution& dist,
                                std::uint64_t n_heralds, std::uint64_t seed,
                                const G2SimulationOptions& options = {});

}  // namespace pairstat
