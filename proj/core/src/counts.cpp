#include "pairstat/counts.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "pairstat/error.hpp"

namespace pairstat {

double MeasuredProbabilities::standard_error(double p) const {
  return std::sqrt(std::max(p * (1.0 - p), 0.0) /
                   static_cast<double>(n_windows));
}

void MeasuredProbabilities::validate() const {
  if (n_windows < 1) throw InvalidArgument("n_windows must be >= 1");
  const std::pair<double, const char*> fields[] = {
      {p_h, "p_h"},   {p_a, "p_a"},   {p_b, "p_b"},    {p_ah, "p_ah"},
      {p_bh, "p_bh"}, {p_ab, "p_ab"}, {p_abh, "p_abh"}};
  for (auto [value, name] : fields) {
    if (!std::isfinite(value) || value < 0.0 || value > 1.0) {
      throw InvalidArgument(std::string(name) + " must lie in [0, 1]");
    }
  }
  if (p_ah > std::min(p_a, p_h) || p_bh > std::min(p_b, p_h)) {
    throw InvalidArgument(
        "coincidence probability exceeds one of its singles");
  }
}

MeasuredProbabilities estimate_probabilities(const ClickCounts& counts) {
  const std::uint64_t n = counts.n_windows();
  if (n == 0) throw InvalidArgument("click counts contain no windows");

  std::uint64_t h = 0, a = 0, b = 0, ah = 0, bh = 0, ab = 0;
  for (std::size_t i = 0; i < kOutcomeCount; ++i) {
    const auto o = DetectorOutcome::from_index(i);
    const std::uint64_t c = counts.outcome_counts[i];
    if (o.h_clicked) h += c;
    if (o.a_clicked) a += c;
    if (o.b_clicked) b += c;
    if (o.a_clicked && o.h_clicked) ah += c;
    if (o.b_clicked && o.h_clicked) bh += c;
    if (o.a_clicked && o.b_clicked) ab += c;
  }
  const auto frac = [n](std::uint64_t k) {
    return static_cast<double>(k) / static_cast<double>(n);
  };
  MeasuredProbabilities m;
  m.p_h = frac(h);
  m.p_a = frac(a);
  m.p_b = frac(b);
  m.p_ah = frac(ah);
  m.p_bh = frac(bh);
  m.p_ab = frac(ab);
  m.p_abh = frac(counts.outcome_counts[7]);
  m.n_windows = n;
  return m;
}

}  // namespace pairstat
