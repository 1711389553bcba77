#include "pairstat/pair_distribution.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include <boost/math/special_functions/gamma.hpp>

#include "pairstat/error.hpp"

namespace pairstat {

PairDistributionKind parse_distribution_kind(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char ch) { return std::tolower(ch); });
  if (lower == "poisson") return PairDistributionKind::poisson;
  if (lower == "thermal") return PairDistributionKind::thermal;
  throw InvalidArgument("unknown pair distribution '" + std::string(name) +
                        "' (expected poisson or thermal)");
}

std::string to_string(PairDistributionKind kind) {
  return kind == PairDistributionKind::poisson ? "poisson" : "thermal";
}

PairDistribution::PairDistribution(PairDistributionKind kind, double mu)
    : kind_(kind), mu_(mu) {
  if (!std::isfinite(mu) || mu < 0.0) {
    throw InvalidArgument("brightness mu must be finite and >= 0, got " +
                          std::to_string(mu));
  }
}

double PairDistribution::thermal_ratio() const {
  const double t = std::tanh(mu_);
  return t * t;
}

double PairDistribution::pmf(std::size_t i) const {
  if (mu_ == 0.0) return i == 0 ? 1.0 : 0.0;
  const auto n = static_cast<double>(i);
  if (kind_ == PairDistributionKind::poisson) {
    return std::exp(n * std::log(mu_) - mu_ - std::lgamma(n + 1.0));
  }
  const double log_ch = std::log(std::cosh(mu_));
  return std::exp(2.0 * n * std::log(std::tanh(mu_)) - 2.0 * log_ch);
}

double PairDistribution::tail_mass(std::size_t k) const {
  if (mu_ == 0.0) return 0.0;
  const auto n = static_cast<double>(k) + 1.0;
  if (kind_ == PairDistributionKind::poisson) {
    return boost::math::gamma_p(n, mu_);
  }
  return std::exp(2.0 * n * std::log(std::tanh(mu_)));
}

double PairDistribution::mean_pairs() const {
  if (kind_ == PairDistributionKind::poisson) return mu_;
  const double s = std::sinh(mu_);
  return s * s;
}

double PairDistribution::max_single_pair_probability(
    PairDistributionKind kind) {
  // mu e^-mu peaks at 1/e; x(1-x) with x = tanh^2 peaks at 1/4.
  return kind == PairDistributionKind::poisson ? std::exp(-1.0) : 0.25;
}

double PairDistribution::single_pair_maximizer(PairDistributionKind kind) {
  return kind == PairDistributionKind::poisson ? 1.0
                                               : std::atanh(std::sqrt(0.5));
}

}  // namespace pairstat
