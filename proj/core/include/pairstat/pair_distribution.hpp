#pragma once

#include <cstddef>
#include <string>
#include <string_view>

namespace pairstat {

enum class PairDistributionKind { poisson, thermal };

/// "poisson" / "thermal" (case-insensitive). Throws InvalidArgument.
PairDistributionKind parse_distribution_kind(std::string_view name);
std::string to_string(PairDistributionKind kind);

/*
 * Number of photon pairs emitted per measurement window.
 *
 *   Poisson: p_i = exp(-mu) mu^i / i!            (mean mu)
 *   Thermal: p_i = tanh(mu)^(2i) / cosh(mu)^2    (mean sinh(mu)^2)
 *
 * For the thermal family mu is a squeezing-like parameter; mean_pairs()
 * reports the actual mean.
 */
class PairDistribution {
 public:
  PairDistribution(PairDistributionKind kind, double mu);

  PairDistributionKind kind() const noexcept { return kind_; }
  double mu() const noexcept { return mu_; }

  double pmf(std::size_t i) const;
  /// Pr(N > k), evaluated without cancellation.
  double tail_mass(std::size_t k) const;
  double mean_pairs() const;

  double p0() const { return pmf(0); }
  double p1() const { return pmf(1); }
  /// 1 - p0 - p1.
  double multi_pair_probability() const { return tail_mass(1); }

  /// Largest attainable single-pair probability and the mu attaining it.
  static double max_single_pair_probability(PairDistributionKind kind);
  static double single_pair_maximizer(PairDistributionKind kind);

  /// tanh(mu)^2 for the thermal family.
  double thermal_ratio() const;

 private:
  PairDistributionKind kind_;
  double mu_;
};

}  // namespace pairstat
