#include "pairstat/bootstrap.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <thread>

#include "pairstat/error.hpp"
#include "pairstat/rng.hpp"

namespace pairstat {

ClickCounts multinomial_resample(const ClickCounts& counts,
                                 std::mt19937_64& rng) {
  ClickCounts out;
  out.seed = counts.seed;
  std::uint64_t remaining = counts.n_windows();
  std::uint64_t mass_left = remaining;
  for (std::size_t i = 0; i < kOutcomeCount && remaining > 0; ++i) {
    const std::uint64_t c = counts.outcome_counts[i];
    if (c == 0) continue;
    if (c == mass_left) {
      out.outcome_counts[i] = remaining;
      break;
    }
    const double p = static_cast<double>(c) / static_cast<double>(mass_left);
    std::binomial_distribution<std::uint64_t> draw(remaining, p);
    const std::uint64_t k = draw(rng);
    out.outcome_counts[i] = k;
    remaining -= k;
    mass_left -= c;
  }
  return out;
}

BootstrapSummary bootstrap_standard_errors(const ClickCounts& counts,
                                           std::size_t n_resamples,
                                           std::uint64_t seed,
                                           const ResampleStatistic& statistic,
                                           unsigned threads) {
  if (n_resamples < 2) throw InvalidArgument("need at least 2 resamples");

  std::vector<std::optional<std::vector<double>>> results(n_resamples);
  unsigned workers = threads ? threads : std::thread::hardware_concurrency();
  workers = static_cast<unsigned>(
      std::clamp<std::size_t>(workers, 1, n_resamples));

  auto run = [&](unsigned worker) {
    for (std::size_t k = worker; k < n_resamples; k += workers) {
      auto rng = make_stream(seed, k);
      results[k] = statistic(multinomial_resample(counts, rng));
    }
  };
  if (workers == 1) {
    run(0);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run, w);
  }

  BootstrapSummary summary;
  summary.n_resamples = n_resamples;
  std::size_t dims = 0;
  for (const auto& r : results) {
    if (r) dims = std::max(dims, r->size());
  }
  std::vector<double> mean(dims, 0.0), m2(dims, 0.0);
  std::size_t n_ok = 0;
  for (const auto& r : results) {
    if (!r || r->size() != dims) {
      ++summary.failures;
      continue;
    }
    // Welford, in resample order.
    ++n_ok;
    for (std::size_t j = 0; j < dims; ++j) {
      const double delta = (*r)[j] - mean[j];
      mean[j] += delta / static_cast<double>(n_ok);
      m2[j] += delta * ((*r)[j] - mean[j]);
    }
  }
  summary.std_errors.assign(dims, 0.0);
  if (n_ok >= 2) {
    for (std::size_t j = 0; j < dims; ++j) {
      summary.std_errors[j] = std::sqrt(m2[j] / static_cast<double>(n_ok - 1));
    }
  }
  return summary;
}

CharacterizedSource propagate_uncertainty(const ClickCounts& counts,
                                          const DarkCountRates& darks,
                                          PairDistributionKind kind,
                                          const BootstrapOptions& options) {
  if (counts.n_windows() < options.min_windows) {
    throw InvalidArgument("bootstrap needs at least " +
                          std::to_string(options.min_windows) + " windows");
  }
  if (options.n_resamples < 100) {
    throw InvalidArgument("bootstrap needs at least 100 resamples");
  }

  CharacterizedSource point =
      solve_transmissions(estimate_probabilities(counts), darks, kind,
                          options.solve);

  SolveOptions relaxed = options.solve;
  relaxed.strict = false;
  const ResampleStatistic statistic =
      [&](const ClickCounts& resample) -> std::optional<std::vector<double>> {
    try {
      const CharacterizedSource s = solve_transmissions(
          estimate_probabilities(resample), darks, kind, relaxed);
      return std::vector<double>{s.eta_h.value, s.eta_a.value, s.eta_b.value,
                                 s.mu.value,    s.p1.value,    s.r.value};
    } catch (const Error&) {
      return std::nullopt;
    }
  };
  const BootstrapSummary summary = bootstrap_standard_errors(
      counts, options.n_resamples, options.seed, statistic, options.threads);

  const double failed = static_cast<double>(summary.failures) /
                        static_cast<double>(summary.n_resamples);
  if (failed > options.max_failure_fraction) {
    throw NumericalError(std::to_string(summary.failures) + " of " +
                         std::to_string(summary.n_resamples) +
                         " bootstrap resamples could not be characterized");
  }
  if (summary.failures > 0) {
    point.warnings.push_back(std::to_string(summary.failures) +
                             " bootstrap resamples failed and were skipped");
  }
  Estimate* fields[] = {&point.eta_h, &point.eta_a, &point.eta_b,
                        &point.mu,    &point.p1,    &point.r};
  for (std::size_t j = 0; j < 6; ++j) {
    fields[j]->std_error = summary.std_errors[j];
  }
  return point;
}

}  // namespace pairstat
