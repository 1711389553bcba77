#include "pairstat/characterization.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <string>
#include <tuple>
#include <utility>

#include <Eigen/Dense>
#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/roots.hpp>

#include "pairstat/error.hpp"

namespace pairstat {
namespace {

using Params = Eigen::Vector4d;             // eta_h, eta_a, eta_b, mu
using Observables = Eigen::Matrix<double, 5, 1>;  // p_h, p_a, p_b, p_ah, p_bh
using Jacobian = Eigen::Matrix<double, 5, 4>;

template <class F>
double bracketed_root(F f, double lo, double hi, double f_lo, double f_hi,
                      double rel_tol, double abs_tol) {
  if (f_lo == 0.0) return lo;
  if (f_hi == 0.0) return hi;
  std::uintmax_t max_iter = 300;
  auto tol = [rel_tol, abs_tol](double a, double b) {
    return std::abs(b - a) <=
           rel_tol * std::max(std::abs(a), std::abs(b)) + abs_tol;
  };
  try {
    const auto [a, b] = boost::math::tools::toms748_solve(f, lo, hi, f_lo,
                                                          f_hi, tol, max_iter);
    return 0.5 * (a + b);
  } catch (const std::exception& e) {
    throw NumericalError(std::string("root finding failed: ") + e.what());
  }
}

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

class ExactModelFit {
 public:
  ExactModelFit(const MeasuredProbabilities& m, const DarkCountRates& darks,
                PairDistributionKind kind, double tail_tol)
      : darks_(darks), kind_(kind) {
    truncation_.tail_tol = tail_tol;
    measured_ << m.p_h, m.p_a, m.p_b, m.p_ah, m.p_bh;
    const double n = static_cast<double>(m.n_windows);
    for (int k = 0; k < 5; ++k) {
      const double v = measured_[k] * (1.0 - measured_[k]);
      sigma_[k] = std::sqrt(std::max(v, 1e-12) / n);
    }
  }

  static Params project(Params x) {
    for (int j = 0; j < 3; ++j) x[j] = std::clamp(x[j], 0.0, 1.0);
    if (x[1] + x[2] > 1.0) {
      const double s = x[1] + x[2];
      x[1] /= s;
      x[2] /= s;
    }
    x[3] = std::max(x[3], 0.0);
    return x;
  }

  Observables observe(const Params& x) const {
    const SetupModel setup(ChannelTransmissions(x[0], x[1], x[2]), darks_);
    const MarginalSet mg = marginals(
        detection_statistics(PairDistribution(kind_, x[3]), setup,
                             truncation_));
    Observables o;
    o << mg.p_h, mg.p_a, mg.p_b, mg.p_ah, mg.p_bh;
    return o;
  }

  Observables residual(const Params& x) const {
    return (observe(x) - measured_).cwiseQuotient(sigma_);
  }

  Jacobian jacobian(const Params& x) const {
    Jacobian jac;
    for (int j = 0; j < 4; ++j) {
      const double h = 1e-6 * std::max(std::abs(x[j]), 1e-6);
      Params up = x;
      Params down = x;
      up[j] += h;
      down[j] -= h;
      const bool up_ok = up == project(up);
      const bool down_ok = down == project(down);
      if (up_ok && down_ok) {
        jac.col(j) = (residual(up) - residual(down)) / (2.0 * h);
      } else if (up_ok) {
        jac.col(j) = (residual(up) - residual(x)) / h;
      } else {
        jac.col(j) = (residual(x) - residual(down)) / h;
      }
    }
    return jac;
  }

  /// Levenberg-Marquardt from `x`; returns (params, chi2, iterations).
  std::tuple<Params, double, int> run(Params x, int max_iterations) const {
    x = project(x);
    Observables r = residual(x);
    double chi2 = r.squaredNorm();
    double lambda = 1e-3;
    int it = 0;
    for (; it < max_iterations && chi2 > 0.0; ++it) {
      const Jacobian jac = jacobian(x);
      const Eigen::Matrix4d a = jac.transpose() * jac;
      const Eigen::Vector4d g = jac.transpose() * r;

      bool improved = false;
      Params next;
      Observables r_next;
      double chi2_next = chi2;
      while (lambda < 1e20) {
        Eigen::Matrix4d damped = a;
        damped.diagonal() *= 1.0 + lambda;
        const Eigen::Vector4d step = damped.ldlt().solve(-g);
        next = project(x + step);
        r_next = residual(next);
        chi2_next = r_next.squaredNorm();
        if (chi2_next < chi2) {
          improved = true;
          lambda = std::max(lambda * 0.1, 1e-15);
          break;
        }
        lambda *= 10.0;
      }
      if (!improved) break;

      double rel_step = 0.0;
      for (int j = 0; j < 4; ++j) {
        rel_step = std::max(rel_step, std::abs(next[j] - x[j]) /
                                          std::max(std::abs(next[j]), 1e-12));
      }
      x = next;
      r = r_next;
      chi2 = chi2_next;
      if (rel_step < 1e-14) {
        ++it;
        break;
      }
    }
    return {x, chi2, it};
  }

 private:
  DarkCountRates darks_;
  PairDistributionKind kind_;
  TruncationOptions truncation_;
  Observables measured_;
  Observables sigma_;
};

ClosedFormEstimate closed_form_estimate(const MeasuredProbabilities& m,
                                        const DarkCountRates& darks,
                                        std::vector<std::string>& warnings) {
  const auto ph1 = dark_count_corrected(m.p_h, darks.d_h(), m.n_windows);
  const auto pa1 = dark_count_corrected(m.p_a, darks.d_a(), m.n_windows);
  const auto pb1 = dark_count_corrected(m.p_b, darks.d_b(), m.n_windows);
  for (auto [c, name] : {std::pair{ph1, "p_H"}, std::pair{pa1, "p_A"},
                         std::pair{pb1, "p_B"}}) {
    if (c.implausible) {
      warnings.push_back(std::string(name) +
                         " lies more than 5 sigma below its dark-count rate");
    }
  }
  if (ph1.value == 0.0 || pa1.value == 0.0 || pb1.value == 0.0) {
    throw NumericalError(
        "dark-count-corrected singles vanish; transmissions undefined");
  }

  const double dh = darks.d_h(), da = darks.d_a(), db = darks.d_b();
  const double qh = 1.0 - dh, qa = 1.0 - da, qb = 1.0 - db;
  // True coincidences: measured minus photon-dark and dark-dark accidentals.
  const double true_ah =
      m.p_ah - ph1.value * da * qh - pa1.value * dh * qa - da * dh;
  const double true_bh =
      m.p_bh - ph1.value * db * qh - pb1.value * dh * qb - db * dh;
  if (true_ah <= 0.0 || true_bh <= 0.0) {
    throw NumericalError(
        "coincidences do not exceed accidental level; transmissions "
        "undefined");
  }

  ClosedFormEstimate cf;
  cf.eta_h_via_a = true_ah / (pa1.value * qa * qh);
  cf.eta_a = true_ah / (ph1.value * qa * qh);
  cf.eta_h_via_b = true_bh / (pb1.value * qb * qh);
  cf.eta_b = true_bh / (ph1.value * qb * qh);
  cf.p1_h_form = ph1.value / cf.eta_h_via_a;
  cf.p1_a_form = pa1.value / cf.eta_a;
  cf.p1_b_form = pb1.value / cf.eta_b;

  // Relative variance of each route is dominated by its coincidence count.
  const double w_a = m.p_ah;
  const double w_b = m.p_bh;
  cf.p1 = (w_a * cf.p1_a_form + w_b * cf.p1_b_form) / (w_a + w_b);
  cf.p1_discrepancy = cf.p1_a_form - cf.p1_b_form;
  return cf;
}

}  // namespace

CorrectedProbability dark_count_corrected(
    double p, double d, std::optional<std::uint64_t> n_windows) {
  if (!std::isfinite(p) || p < 0.0 || p > 1.0) {
    throw InvalidArgument("probability must lie in [0, 1]");
  }
  if (!std::isfinite(d) || d < 0.0 || d >= 1.0) {
    throw InvalidArgument("dark-count probability must lie in [0, 1)");
  }
  CorrectedProbability out;
  out.value = (p - d) / (1.0 - d);
  if (out.value < 0.0) {
    out.value = 0.0;
    out.clamped = true;
    if (n_windows && *n_windows > 0) {
      const double sigma =
          std::sqrt(d * (1.0 - d) / static_cast<double>(*n_windows));
      out.implausible = p < d - 5.0 * sigma;
    }
  }
  return out;
}

CharacterizedSource solve_transmissions(const MeasuredProbabilities& m,
                                        const DarkCountRates& darks,
                                        PairDistributionKind kind,
                                        const SolveOptions& options) {
  m.validate();
  CharacterizedSource out;
  out.kind = kind;
  out.closed_form = closed_form_estimate(m, darks, out.warnings);
  const ClosedFormEstimate& cf = out.closed_form;

  const double w_a = m.p_ah, w_b = m.p_bh;
  const double eta_h_seed =
      (w_a * cf.eta_h_via_a + w_b * cf.eta_h_via_b) / (w_a + w_b);

  const double p1_max = PairDistribution::max_single_pair_probability(kind);
  double p1_seed = cf.p1;
  if (p1_seed >= p1_max) {
    out.warnings.push_back("closed-form p1 " + format_double(p1_seed) +
                           " exceeds the distribution maximum");
    p1_seed = p1_max * (1.0 - 1e-9);
  }
  Params x;
  x << eta_h_seed, cf.eta_a, cf.eta_b, brightness_from_p1(kind, p1_seed);
  x = ExactModelFit::project(x);

  if (options.exact_fit) {
    const ExactModelFit fit(m, darks, kind, options.tail_tol);
    auto [best, chi2, iterations] = fit.run(x, options.max_iterations);
    x = best;
    out.fit_chi2 = chi2;
    out.fit_iterations = iterations;
    if (!(x[3] > 0.0) || !(x[0] > 0.0) || !(x[1] > 0.0) || !(x[2] > 0.0)) {
      throw NumericalError("exact-model fit collapsed onto a boundary");
    }
  }

  out.eta_h.value = x[0];
  out.eta_a.value = x[1];
  out.eta_b.value = x[2];
  out.mu.value = x[3];
  const PairDistribution dist(kind, x[3]);
  out.p1.value = dist.p1();
  out.r.value = multipair_ratio(dist);

  if (out.r.value < options.fail_ratio) {
    throw ConsistencyError("multi-pair ratio r = " +
                           format_double(out.r.value) + " is below " +
                           format_double(options.fail_ratio) +
                           "; multi-pair emission is not negligible");
  }
  if (out.r.value < options.warn_ratio) {
    out.warnings.push_back("multi-pair ratio r = " +
                           format_double(out.r.value) + " is below " +
                           format_double(options.warn_ratio));
  }

  const double limit = options.consistency_sigma * options.consistency_sigma;
  if (options.exact_fit && out.fit_chi2 > limit) {
    const std::string msg =
        "A and B channels disagree: fit chi2 = " +
        format_double(out.fit_chi2) + " (p1 via A " +
        format_double(cf.p1_a_form) + ", via B " +
        format_double(cf.p1_b_form) + ")";
    if (options.strict) throw ConsistencyError(msg);
    out.warnings.push_back(msg);
  }
  if (options.strict && !out.warnings.empty()) {
    throw ConsistencyError(out.warnings.front());
  }
  return out;
}

double brightness_from_p1(PairDistributionKind kind, double p1) {
  if (!std::isfinite(p1) || p1 < 0.0) {
    throw InvalidArgument("p1 must be a finite probability");
  }
  const double p1_max = PairDistribution::max_single_pair_probability(kind);
  if (p1 > p1_max) {
    throw NumericalError("p1 = " + format_double(p1) +
                         " exceeds the maximum attainable single-pair "
                         "probability " + format_double(p1_max));
  }
  if (p1 == 0.0) return 0.0;
  const double hi = PairDistribution::single_pair_maximizer(kind);
  auto f = [kind, p1](double mu) { return PairDistribution(kind, mu).p1() - p1; };
  return bracketed_root(f, 0.0, hi, -p1, f(hi), 0.0, 1e-13);
}

double multipair_ratio(const PairDistribution& dist) {
  const double tail = dist.multi_pair_probability();
  if (tail == 0.0) return std::numeric_limits<double>::infinity();
  return dist.p1() / tail;
}

BrightnessBound brightness_upper_bound(double g_measured,
                                       const ChannelTransmissions& assumed,
                                       const DarkCountRates& darks,
                                       PairDistributionKind kind,
                                       const BoundOptions& options) {
  if (!std::isfinite(g_measured) || g_measured <= 1.0) {
    throw InvalidArgument("measured G must exceed 1");
  }
  if (!(options.mu_min > 0.0) || !(options.mu_max > options.mu_min) ||
      options.grid_points < 3) {
    throw InvalidArgument("invalid mu scan range");
  }
  const SetupModel setup(assumed, darks);
  auto g_of_log_mu = [&](double log_mu) {
    return correlation_strength(detection_statistics(
        PairDistribution(kind, std::exp(log_mu)), setup, options.truncation));
  };

  const double lo = std::log(options.mu_min);
  const double hi = std::log(options.mu_max);
  const std::size_t n = options.grid_points;
  std::vector<double> grid(n), g(n);
  for (std::size_t i = 0; i < n; ++i) {
    grid[i] = lo + (hi - lo) * static_cast<double>(i) /
                       static_cast<double>(n - 1);
    g[i] = g_of_log_mu(grid[i]);
  }
  const auto peak_it = std::max_element(g.begin(), g.end());
  const auto k = static_cast<std::size_t>(peak_it - g.begin());

  BrightnessBound out;
  {
    const double a = grid[k == 0 ? 0 : k - 1];
    const double b = grid[std::min(k + 1, n - 1)];
    std::uintmax_t iters = 200;
    const auto [x, neg_g] = boost::math::tools::brent_find_minima(
        [&](double t) { return -g_of_log_mu(t); }, a, b, 40, iters);
    if (-neg_g >= g[k]) {
      out.g_peak = -neg_g;
      out.mu_at_peak = std::exp(x);
    } else {
      out.g_peak = g[k];
      out.mu_at_peak = std::exp(grid[k]);
    }
  }
  if (g_measured > out.g_peak) {
    throw NumericalError("measured G = " + format_double(g_measured) +
                         " exceeds the curve maximum " +
                         format_double(out.g_peak) +
                         "; assumed transmissions are too low");
  }

  // Right-most grid point still at or above g_measured.
  std::size_t j = n - 1;
  while (j > k && g[j] < g_measured) --j;
  if (j == n - 1) {
    out.saturated = true;
    out.mu_max = options.mu_max;
    out.warnings.push_back(
        "G stays above the measured value up to mu = " +
        format_double(options.mu_max) + "; bound saturated at the scan limit");
  } else {
    const double a = j == k ? std::log(out.mu_at_peak) : grid[j];
    const double b = grid[j + 1];
    auto f = [&](double t) { return g_of_log_mu(t) - g_measured; };
    const double root =
        bracketed_root(f, a, b, f(a), f(b), options.mu_tolerance * 1e-2, 0.0);
    out.mu_max = std::exp(root);
  }
  out.r_min = multipair_ratio(PairDistribution(kind, out.mu_max));
  return out;
}

double heralding_probability(const SetupModel& setup,
                             const PairDistribution& dist,
                             const TruncationOptions& truncation) {
  return marginals(detection_statistics(dist, setup, truncation)).p_h;
}

double brightness_from_heralding(const SetupModel& setup,
                                 PairDistributionKind kind, double p_h_target,
                                 const TruncationOptions& truncation) {
  const double dh = setup.darks().d_h();
  if (!std::isfinite(p_h_target)) {
    throw InvalidArgument("heralding probability must be finite");
  }
  if (p_h_target == dh) return 0.0;
  if (p_h_target < dh || p_h_target >= 1.0) {
    throw NumericalError("heralding probability " + format_double(p_h_target) +
                         " outside the attainable range (d_H, p_H max)");
  }
  auto f = [&](double mu) {
    return heralding_probability(setup, PairDistribution(kind, mu),
                                 truncation) -
           p_h_target;
  };
  // Thermal sums need ~cosh(mu)^2 terms; keep mu where that stays bounded.
  const double cap = kind == PairDistributionKind::poisson ? 1000.0 : 4.5;
  double hi = 1.0;
  double f_hi = f(hi);
  while (f_hi < 0.0) {
    if (hi >= cap) {
      throw NumericalError("heralding probability " +
                           format_double(p_h_target) +
                           " is not reachable with these transmissions");
    }
    hi = std::min(hi * 2.0, cap);
    f_hi = f(hi);
  }
  return bracketed_root(f, 0.0, hi, dh - p_h_target, f_hi, 1e-15, 1e-300);
}

double predict_g2(const SetupModel& setup, const PairDistribution& dist,
                  const TruncationOptions& truncation) {
  return heralded_g2(marginals(detection_statistics(dist, setup, truncation)));
}

double g2_low_brightness_approx(double mu, double eta_h) {
  return mu * (2.0 - eta_h);
}

HeraldedPrediction predict_at_heralding(const SetupModel& setup,
                                        PairDistributionKind kind, double p_h,
                                        const TruncationOptions& truncation) {
  HeraldedPrediction out;
  out.p_h = p_h;
  out.mu = brightness_from_heralding(setup, kind, p_h, truncation);
  const PairDistribution dist(kind, out.mu);
  out.g2 = predict_g2(setup, dist, truncation);
  out.g2_approx =
      g2_low_brightness_approx(dist.mean_pairs(), setup.transmissions().eta_h());
  return out;
}

}  // namespace pairstat
