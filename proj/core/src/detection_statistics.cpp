#include "pairstat/detection_statistics.hpp"

#include <cmath>
#include <string>

#include "pairstat/error.hpp"
#include "pairstat/transition_matrix.hpp"

namespace pairstat {

ProbabilityVector detection_statistics(const PairDistribution& dist,
                                       const SetupModel& setup,
                                       const TruncationOptions& options) {
  if (!(options.tail_tol > 0.0) || options.tail_tol >= 1.0) {
    throw InvalidArgument("tail_tol must lie in (0, 1)");
  }
  const TransitionMatrix pair =
      correlated_detection_matrix(setup.transmissions(), setup.c());
  const TransitionMatrix dark = dark_count_matrix(setup.darks());

  // state = M^i P0, accumulated with weight p_i.
  Vector8 state = ProbabilityVector::initial().entries();
  Vector8 sum = Vector8::Zero();
  double tail = 1.0;
  std::size_t i = 0;
  for (;; ++i) {
    if (i >= options.max_terms) {
      throw NumericalError(
          "pair-number sum needs more than " +
          std::to_string(options.max_terms) + " terms (mu = " +
          std::to_string(dist.mu()) + ", tail_tol = " +
          std::to_string(options.tail_tol) + ")");
    }
    sum += dist.pmf(i) * state;
    tail = dist.tail_mass(i);
    if (tail <= options.tail_tol) break;
    state = pair * state;
  }

  Vector8 p = dark * sum;
  p /= p.sum();
  return ProbabilityVector(p);
}

MarginalSet marginals(const ProbabilityVector& p) {
  MarginalSet m;
  m.p_h = p[3] + p[5] + p[6] + p[7];
  m.p_a = p[1] + p[4] + p[5] + p[7];
  m.p_b = p[2] + p[4] + p[6] + p[7];
  m.p_ah = p[5] + p[7];
  m.p_bh = p[6] + p[7];
  m.p_ab = p[4] + p[7];
  m.p_abh = p[7];
  if (m.p_h > 0.0) {
    m.p_a_given_h = m.p_ah / m.p_h;
    m.p_b_given_h = m.p_bh / m.p_h;
    m.p_ab_given_h = m.p_abh / m.p_h;
  }
  return m;
}

double correlation_strength(const ProbabilityVector& p) {
  const MarginalSet m = marginals(p);
  const double denom = m.p_h * m.p_a;
  if (denom == 0.0) {
    throw NumericalError(
        "correlation strength undefined: p_H * p_A is zero");
  }
  return m.p_ah / denom;
}

double heralded_g2(const MarginalSet& m) {
  if (!m.p_a_given_h || !m.p_b_given_h || !m.p_ab_given_h) {
    throw NumericalError("g2 undefined: heralding probability is zero");
  }
  const double denom = *m.p_a_given_h * *m.p_b_given_h;
  if (denom == 0.0) {
    throw NumericalError("g2 undefined: p_A|H * p_B|H is zero");
  }
  return *m.p_ab_given_h / denom;
}

}  // namespace pairstat
