#include "pairstat/curves.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

#include "pairstat/error.hpp"

namespace pairstat {
namespace {

void put_row(std::ostream& out, std::initializer_list<double> values) {
  char buf[32];
  bool first = true;
  for (double v : values) {
    std::snprintf(buf, sizeof buf, "%.12g", v);
    if (!first) out << ',';
    out << buf;
    first = false;
  }
  out << '\n';
}

}  // namespace

std::vector<double> sample_range(double lo, double hi, std::size_t points,
                                 Spacing spacing) {
  if (points < 1) throw InvalidArgument("need at least one point");
  if (!(lo <= hi)) throw InvalidArgument("range minimum exceeds maximum");
  if (spacing == Spacing::log && !(lo > 0.0)) {
    throw InvalidArgument("log spacing needs a positive minimum");
  }
  std::vector<double> xs(points);
  for (std::size_t i = 0; i < points; ++i) {
    const double f = points == 1 ? 0.0
                                 : static_cast<double>(i) /
                                       static_cast<double>(points - 1);
    xs[i] = spacing == Spacing::linear
                ? lo + (hi - lo) * f
                : std::exp(std::log(lo) + (std::log(hi) - std::log(lo)) * f);
  }
  xs.back() = hi;
  return xs;
}

std::vector<GCurvePoint> g_curve(const SetupModel& setup,
                                 PairDistributionKind kind,
                                 const std::vector<double>& mus,
                                 const TruncationOptions& truncation) {
  std::vector<GCurvePoint> out;
  out.reserve(mus.size());
  for (double mu : mus) {
    out.push_back({mu, correlation_strength(detection_statistics(
                           PairDistribution(kind, mu), setup, truncation))});
  }
  return out;
}

std::vector<HeraldedPrediction> g2_curve(
    const SetupModel& setup, PairDistributionKind kind,
    const std::vector<double>& heralding_probabilities,
    const TruncationOptions& truncation) {
  std::vector<HeraldedPrediction> out;
  out.reserve(heralding_probabilities.size());
  for (double p_h : heralding_probabilities) {
    out.push_back(predict_at_heralding(setup, kind, p_h, truncation));
  }
  return out;
}

void write_g_curve_csv(std::ostream& out,
                       const std::vector<GCurvePoint>& curve) {
  out << "mu,G\n";
  for (const auto& p : curve) put_row(out, {p.mu, p.g});
}

void write_g2_curve_csv(std::ostream& out,
                        const std::vector<HeraldedPrediction>& curve) {
  out << "p_H,mu,g2,g2_approx\n";
  for (const auto& p : curve) put_row(out, {p.p_h, p.mu, p.g2, p.g2_approx});
}

}  // namespace pairstat
