#pragma once

#include <array>
#include <cstdint>

#include "pairstat/types.hpp"

namespace pairstat {

/// Per-window outcome histogram, canonical outcome ordering.
struct ClickCounts {
  std::array<std::uint64_t, kOutcomeCount> outcome_counts{};
  /// Seed of the generating simulation; 0 for measured data.
  std::uint64_t seed = 0;

  std::uint64_t n_windows() const noexcept {
    std::uint64_t n = 0;
    for (auto c : outcome_counts) n += c;
    return n;
  }
  std::uint64_t& operator[](DetectorOutcome o) {
    return outcome_counts[o.index()];
  }
  std::uint64_t operator[](DetectorOutcome o) const {
    return outcome_counts[o.index()];
  }

  ClickCounts& operator+=(const ClickCounts& other) {
    for (std::size_t i = 0; i < kOutcomeCount; ++i) {
      outcome_counts[i] += other.outcome_counts[i];
    }
    return *this;
  }

  friend bool operator==(const ClickCounts&, const ClickCounts&) = default;
};

/// Empirical singles and coincidence probabilities per window.
struct MeasuredProbabilities {
  double p_h = 0.0;
  double p_a = 0.0;
  double p_b = 0.0;
  double p_ah = 0.0;
  double p_bh = 0.0;
  // Not used by the estimators; kept for measured g2.
  double p_ab = 0.0;
  double p_abh = 0.0;
  std::uint64_t n_windows = 1;

  /// Binomial standard error sqrt(p(1-p)/n).
  double standard_error(double p) const;

  /// Throws InvalidArgument if ranges or p_xh <= min(p_x, p_h) are violated.
  void validate() const;
};

/// Marginal sums over the histogram. Throws InvalidArgument if empty.
MeasuredProbabilities estimate_probabilities(const ClickCounts& counts);

}  // namespace pairstat
