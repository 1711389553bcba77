#pragma once

#include <pairstat/characterization.hpp>
#include <pairstat/detection_statistics.hpp>
#include <pairstat/types.hpp>

#include "oracle.hpp"

namespace testing {

inline pairstat::SetupModel model_of(const oracle::Setup& s) {
  return {{s.eta_h, s.eta_a, s.eta_b}, {s.d_h, s.d_a, s.d_b}, s.c};
}

inline oracle::Family family_of(pairstat::PairDistributionKind k) {
  return k == pairstat::PairDistributionKind::poisson
             ? oracle::Family::poisson
             : oracle::Family::thermal;
}

// Exact outcome probabilities, as the measured frequencies of an infinite run.
inline pairstat::MeasuredProbabilities noiseless(
    const pairstat::ProbabilityVector& p) {
  const auto m = pairstat::marginals(p);
  pairstat::MeasuredProbabilities out;
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

// Experimental setup of the low-brightness characterization run.
inline const oracle::Setup kLabSetup{0.1212, 0.0145, 0.0162,
                                     2.5e-7, 2.87e-4, 3.84e-4, 1.0};
inline constexpr double kLabMu = 0.02375;

}  // namespace testing
