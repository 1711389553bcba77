#pragma once

#include <cstddef>
#include <optional>

#include "pairstat/pair_distribution.hpp"
#include "pairstat/types.hpp"

namespace pairstat {

struct TruncationOptions {
  /// The pair-number sum stops once the remaining pmf mass is <= tail_tol.
  /// Heralded g2 divides triple-coincidence probabilities far below 1e-12,
  /// hence the tiny default; the tail mass is analytic, so it is cheap.
  double tail_tol = 1e-18;
  /// Guard against pathological mu / tail_tol combinations.
  std::size_t max_terms = 1'000'000;
};

/*
 * Exact detection statistics of one measurement window:
 *
 *   P = sum_i p_i * M_dc * M^i * P0
 *
 * with M the (possibly spectrally correlated) single-pair matrix. The sum
 * is truncated at the first index whose cumulative pmf mass reaches
 * 1 - tail_tol and renormalized over the included mass.
 *
 * Throws NumericalError if more than options.max_terms terms are needed.
 */
ProbabilityVector detection_statistics(const PairDistribution& dist,
                                       const SetupModel& setup,
                                       const TruncationOptions& options = {});

/// Singles, coincidences and herald-conditioned probabilities of a P vector.
struct MarginalSet {
  double p_h = 0.0;
  double p_a = 0.0;
  double p_b = 0.0;
  double p_ah = 0.0;
  double p_bh = 0.0;
  double p_ab = 0.0;
  double p_abh = 0.0;
  // Empty when p_h == 0.
  std::optional<double> p_a_given_h;
  std::optional<double> p_b_given_h;
  std::optional<double> p_ab_given_h;
};

MarginalSet marginals(const ProbabilityVector& p);

/// G = p_AH / (p_H p_A). Throws NumericalError when p_H p_A == 0.
double correlation_strength(const ProbabilityVector& p);

/// g2 = p_AB|H / (p_A|H p_B|H). Throws NumericalError when undefined.
double heralded_g2(const MarginalSet& m);

}  // namespace pairstat
