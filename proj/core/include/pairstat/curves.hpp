#pragma once

#include <cstddef>
#include <iosfwd>
#include <vector>

#include "pairstat/characterization.hpp"

namespace pairstat {

enum class Spacing { linear, log };

/// `points` values from lo to hi inclusive.
std::vector<double> sample_range(double lo, double hi, std::size_t points,
                                 Spacing spacing);

struct GCurvePoint {
  double mu = 0.0;
  double g = 0.0;
};

/// Correlation strength G versus brightness.
std::vector<GCurvePoint> g_curve(const SetupModel& setup,
                                 PairDistributionKind kind,
                                 const std::vector<double>& mus,
                                 const TruncationOptions& truncation = {});

/// Brightness, g2 and its low-brightness approximation versus p_H.
std::vector<HeraldedPrediction> g2_curve(
    const SetupModel& setup, PairDistributionKind kind,
    const std::vector<double>& heralding_probabilities,
    const TruncationOptions& truncation = {});

/// CSV with header `mu,G`.
void write_g_curve_csv(std::ostream& out,
                       const std::vector<GCurvePoint>& curve);
/// CSV with header `p_H,mu,g2,g2_approx`.
void write_g2_curve_csv(std::ostream& out,
                        const std::vector<HeraldedPrediction>& curve);

}  // namespace pairstat
