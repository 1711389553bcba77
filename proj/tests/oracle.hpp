#pragma once

// Closed-form click statistics that never touch the transition matrices.
//
// Each pair independently lands in one of the fates HA, HB, H, A, B or
// nothing. For a set S of detectors let q_S be the probability that one pair
// clicks something in S. With G the probability generating function of the
// pair number,
//
//   Pr(nothing in S clicks) = G(1 - q_S) * prod_{x in S} (1 - d_x),
//
// and exact outcomes follow by inclusion-exclusion.

#include <algorithm>
#include <array>
#include <cmath>
#include <random>

namespace oracle {

struct Setup {
  double eta_h = 0, eta_a = 0, eta_b = 0;
  double d_h = 0, d_a = 0, d_b = 0;
  double c = 1;
};

enum class Family { poisson, thermal };

// Bits: 1 = A, 2 = B, 4 = H.
inline double hit_probability(const Setup& s, unsigned set) {
  const double h = s.eta_h, a = s.eta_a, b = s.eta_b, c = s.c;
  const double fate[5] = {c * h * a, c * h * b, h * (1 - c * (a + b)),
                          a * (1 - c * h), b * (1 - c * h)};
  const unsigned mask[5] = {1 | 4, 2 | 4, 4, 1, 2};
  double q = 0;
  for (int f = 0; f < 5; ++f) {
    if (mask[f] & set) q += fate[f];
  }
  return q;
}

inline double pgf(Family family, double mu, double y) {
  if (family == Family::poisson) return std::exp(-mu * (1 - y));
  const double x = std::tanh(mu) * std::tanh(mu);
  return (1 - x) / (1 - x * y);
}

inline double none_click(Family family, double mu, const Setup& s,
                         unsigned set) {
  double dark = 1;
  if (set & 1) dark *= 1 - s.d_a;
  if (set & 2) dark *= 1 - s.d_b;
  if (set & 4) dark *= 1 - s.d_h;
  return pgf(family, mu, 1 - hit_probability(s, set)) * dark;
}

// Canonical outcome order: none, A, B, H, AB, AH, BH, ABH.
inline constexpr unsigned kOutcomeBits[8] = {0, 1, 2, 4, 3, 5, 6, 7};

inline std::array<double, 8> outcomes(Family family, double mu,
                                      const Setup& s) {
  std::array<double, 8> p{};
  for (int k = 0; k < 8; ++k) {
    const unsigned clicked = kOutcomeBits[k];
    const unsigned silent = 7u & ~clicked;
    double sum = 0;
    for (unsigned t = clicked;; t = (t - 1) & clicked) {
      const int parity = __builtin_popcount(t) & 1;
      sum += (parity ? -1.0 : 1.0) * none_click(family, mu, s, silent | t);
      if (t == 0) break;
    }
    p[k] = sum;
  }
  return p;
}

// Marginals with expm1 where the leading term would cancel.
inline double poisson_p_h(double mu, const Setup& s) {
  return -std::expm1(-mu * s.eta_h) * (1 - s.d_h) + s.d_h;
}

inline Setup random_setup(std::mt19937_64& rng, bool with_c) {
  std::uniform_real_distribution<double> u(0, 1);
  Setup s;
  s.eta_h = u(rng);
  s.eta_a = u(rng);
  s.eta_b = u(rng) * (1 - s.eta_a);
  s.d_h = 1e-3 * u(rng);
  s.d_a = 1e-3 * u(rng);
  s.d_b = 1e-3 * u(rng);
  if (with_c) {
    // The no-detection fate 1 - h - a - b + c h (a + b) must stay >= 0.
    const double ab = s.eta_a + s.eta_b;
    double c_min = 0.05;
    if (s.eta_h * ab > 0) {
      c_min = std::max(c_min, (s.eta_h + ab - 1) / (s.eta_h * ab));
    }
    s.c = c_min + (1 - c_min) * u(rng);
  }
  return s;
}

}  // namespace oracle
