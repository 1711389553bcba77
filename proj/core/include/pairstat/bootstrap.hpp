#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <vector>

#include "pairstat/characterization.hpp"
#include "pairstat/counts.hpp"

namespace pairstat {

/// Multinomial draw of counts.n_windows() windows from the empirical
/// outcome frequencies.
ClickCounts multinomial_resample(const ClickCounts& counts,
                                 std::mt19937_64& rng);

/// Statistic evaluated on one resample; empty marks a failed evaluation.
using ResampleStatistic =
    std::function<std::optional<std::vector<double>>(const ClickCounts&)>;

struct BootstrapSummary {
  std::vector<double> std_errors;  // sample standard deviation per component
  std::size_t n_resamples = 0;
  std::size_t failures = 0;
};

/*
 * Nonparametric bootstrap over windows. Resample k uses RNG stream
 * (seed, k), so the summary does not depend on thread scheduling.
 * `statistic` must be safe to call concurrently.
 */
BootstrapSummary bootstrap_standard_errors(const ClickCounts& counts,
                                           std::size_t n_resamples,
                                           std::uint64_t seed,
                                           const ResampleStatistic& statistic,
                                           unsigned threads = 0);

struct BootstrapOptions {
  std::size_t n_resamples = 200;
  std::uint64_t seed = 1;
  unsigned threads = 0;
  /// Fail if more than this fraction of resamples cannot be solved.
  double max_failure_fraction = 0.1;
  std::uint64_t min_windows = 10'000;
  SolveOptions solve;
};

/// solve_transmissions on the counts, with bootstrap standard errors on
/// eta_h, eta_a, eta_b, mu, p1 and r.
CharacterizedSource propagate_uncertainty(const ClickCounts& counts,
                                          const DarkCountRates& darks,
                                          PairDistributionKind kind,
                                          const BootstrapOptions& options = {});

}  // namespace pairstat
