#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pairstat/counts.hpp"
#include "pairstat/detection_statistics.hpp"
#include "pairstat/pair_distribution.hpp"
#include "pairstat/types.hpp"

namespace pairstat {

/// A value with an optional standard error (empty = no error estimate).
struct Estimate {
  double value = 0.0;
  std::optional<double> std_error;
};

struct CorrectedProbability {
  double value = 0.0;
  /// p < d; value clamped to 0.
  bool clamped = false;
  /// p < d - 5 sigma for the given window count.
  bool implausible = false;
};

/// (p - d) / (1 - d): probability of a photon click rather than a dark count.
CorrectedProbability dark_count_corrected(
    double p, double d, std::optional<std::uint64_t> n_windows = std::nullopt);

/// Single-pair-truncated estimates from singles and two-fold coincidences.
struct ClosedFormEstimate {
  double eta_h_via_a = 0.0;
  double eta_h_via_b = 0.0;
  double eta_a = 0.0;
  double eta_b = 0.0;
  double p1_h_form = 0.0;  // p_H^(1) / eta_H, A route
  double p1_a_form = 0.0;  // p_A^(1) / eta_A
  double p1_b_form = 0.0;  // p_B^(1) / eta_B
  /// Coincidence-weighted mean of the A-route and B-route p1.
  double p1 = 0.0;
  /// A-route p1 minus B-route p1.
  double p1_discrepancy = 0.0;
};

struct CharacterizedSource {
  PairDistributionKind kind = PairDistributionKind::poisson;
  Estimate eta_h;
  Estimate eta_a;
  Estimate eta_b;
  Estimate mu;
  Estimate p1;
  Estimate r;
  ClosedFormEstimate closed_form;
  /// Chi-square of the exact-model fit (one degree of freedom).
  double fit_chi2 = 0.0;
  int fit_iterations = 0;
  std::vector<std::string> warnings;

  ChannelTransmissions transmissions() const {
    return {eta_h.value, eta_a.value, eta_b.value};
  }
  PairDistribution distribution() const { return {kind, mu.value}; }
};

struct SolveOptions {
  double tail_tol = 1e-18;
  /// Warn below this multi-pair ratio, fail below the second.
  double warn_ratio = 40.0;
  double fail_ratio = 10.0;
  /// Fit chi-square above consistency_sigma^2 is flagged inconsistent.
  double consistency_sigma = 5.0;
  /// Escalate consistency warnings to ConsistencyError.
  bool strict = false;
  /// Refine the closed-form estimate against the exact forward model.
  bool exact_fit = true;
  int max_iterations = 200;
};

/*
 * Recover eta_H, eta_A, eta_B and mu from one low-brightness run.
 *
 * The single-pair closed form seeds a Levenberg-Marquardt fit of the exact
 * model to (p_H, p_A, p_B, p_AH, p_BH), which removes the multi-pair bias of
 * the truncated estimators. Throws NumericalError when corrected singles or
 * true coincidences vanish or the fit fails, ConsistencyError when r is
 * below fail_ratio (or, with strict, when the A and B routes disagree).
 */
CharacterizedSource solve_transmissions(const MeasuredProbabilities& m,
                                        const DarkCountRates& darks,
                                        PairDistributionKind kind,
                                        const SolveOptions& options = {});

/// Low-brightness root of p1(mu) = p1. Throws NumericalError above the max.
double brightness_from_p1(PairDistributionKind kind, double p1);

/// p1 / (1 - p0 - p1); +inf when the multi-pair mass underflows.
double multipair_ratio(const PairDistribution& dist);

struct BoundOptions {
  double mu_min = 1e-8;
  double mu_max = 10.0;
  std::size_t grid_points = 400;
  /// Relative tolerance of the returned mu.
  double mu_tolerance = 1e-9;
  TruncationOptions truncation;
};

struct BrightnessBound {
  double mu_max = 0.0;
  double r_min = 0.0;
  double g_peak = 0.0;
  double mu_at_peak = 0.0;
  /// G stays above g_measured up to the scan limit; mu_max is that limit.
  bool saturated = false;
  std::vector<std::string> warnings;
};

/*
 * Largest mu whose G(mu) equals g_measured, for transmissions that
 * over-estimate the real ones (detector efficiencies only). The true mu is
 * below the returned value. Throws NumericalError if g_measured exceeds the
 * curve maximum.
 */
BrightnessBound brightness_upper_bound(double g_measured,
                                       const ChannelTransmissions& assumed,
                                       const DarkCountRates& darks,
                                       PairDistributionKind kind,
                                       const BoundOptions& options = {});

double heralding_probability(const SetupModel& setup,
                             const PairDistribution& dist,
                             const TruncationOptions& truncation = {});

/// mu at which the forward model heralds with p_h_target.
double brightness_from_heralding(const SetupModel& setup,
                                 PairDistributionKind kind, double p_h_target,
                                 const TruncationOptions& truncation = {});

double predict_g2(const SetupModel& setup, const PairDistribution& dist,
                  const TruncationOptions& truncation = {});

/// mu * (2 - eta_H): Poisson, low brightness, no darks.
double g2_low_brightness_approx(double mu, double eta_h);

struct HeraldedPrediction {
  double p_h = 0.0;
  double mu = 0.0;
  double g2 = 0.0;
  double g2_approx = 0.0;
};

HeraldedPrediction predict_at_heralding(
    const SetupModel& setup, PairDistributionKind kind, double p_h,
    const TruncationOptions& truncation = {});

}  // namespace pairstat
