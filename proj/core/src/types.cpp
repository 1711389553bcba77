#include "pairstat/types.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "pairstat/error.hpp"

namespace pairstat {
namespace {

void require_probability(double value, const char* name) {
  if (!std::isfinite(value) || value < 0.0 || value > 1.0) {
    throw InvalidArgument(std::string(name) + " must lie in [0, 1], got " +
                          std::to_string(value));
  }
}

Vector8 checked(const Vector8& entries) {
  constexpr double slack = 1e-15;
  for (Eigen::Index i = 0; i < entries.size(); ++i) {
    if (!std::isfinite(entries[i]) || entries[i] < -slack ||
        entries[i] > 1.0 + slack) {
      throw InvalidArgument("probability vector entry " + std::to_string(i) +
                            " outside [0, 1]");
    }
  }
  if (std::abs(entries.sum() - 1.0) > ProbabilityVector::kSumTolerance) {
    throw InvalidArgument("probability vector does not sum to 1");
  }
  return entries;
}

}  // namespace

ProbabilityVector::ProbabilityVector(const Vector8& entries)
    : entries_(checked(entries)) {}

ProbabilityVector::ProbabilityVector(const std::array<double, 8>& entries)
    : ProbabilityVector(Vector8(Eigen::Map<const Vector8>(entries.data()))) {}

ProbabilityVector ProbabilityVector::initial() {
  Vector8 p0 = Vector8::Zero();
  p0[0] = 1.0;
  return ProbabilityVector(p0);
}

ChannelTransmissions::ChannelTransmissions(double eta_h, double eta_a,
                                           double eta_b)
    : eta_h_(eta_h), eta_a_(eta_a), eta_b_(eta_b) {
  require_probability(eta_h, "eta_h");
  require_probability(eta_a, "eta_a");
  require_probability(eta_b, "eta_b");
  // A photon behind the splitter reaches at most one of A and B.
  if (eta_a + eta_b > 1.0) {
    throw InvalidArgument("eta_a + eta_b must not exceed 1 (got " +
                          std::to_string(eta_a + eta_b) + ")");
  }
}

ChannelTransmissions ChannelTransmissions::scaled(double factor) const {
  return {eta_h_ * factor, eta_a_ * factor, eta_b_ * factor};
}

DarkCountRates::DarkCountRates(double d_h, double d_a, double d_b)
    : d_h_(d_h), d_a_(d_a), d_b_(d_b) {
  for (auto [value, name] : {std::pair{d_h, "d_h"}, std::pair{d_a, "d_a"},
                             std::pair{d_b, "d_b"}}) {
    if (!std::isfinite(value) || value < 0.0 || value >= 1.0) {
      throw InvalidArgument(std::string(name) + " must lie in [0, 1), got " +
                            std::to_string(value));
    }
  }
}

SetupModel::SetupModel(ChannelTransmissions transmissions,
                       DarkCountRates darks, double c)
    : transmissions_(transmissions), darks_(darks), c_(c) {
  if (!std::isfinite(c) || c <= 0.0 || c > 1.0) {
    throw InvalidArgument("correlation factor c must lie in (0, 1], got " +
                          std::to_string(c));
  }
}

}  // namespace pairstat
