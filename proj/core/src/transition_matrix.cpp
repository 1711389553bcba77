#include "pairstat/transition_matrix.hpp"

#include <cmath>
#include <string>

#include "pairstat/error.hpp"

namespace pairstat {

TransitionMatrix detection_matrix(const ChannelTransmissions& t) {
  const double h = t.eta_h();
  const double a = t.eta_a();
  const double b = t.eta_b();

  Matrix8 m = Matrix8::Zero();
  // From "nothing clicked": the pair either misses everything, reaches one
  // detector, or reaches H together with one of A/B.
  m(0, 0) = 1.0 - h + (a + b) * (h - 1.0);
  m(1, 0) = a * (1.0 - h);
  m(2, 0) = b * (1.0 - h);
  m(3, 0) = h * (1.0 - (a + b));
  m(5, 0) = a * h;
  m(6, 0) = b * h;

  m(1, 1) = (1.0 - b) * (1.0 - h);
  m(4, 1) = b * (1.0 - h);
  m(5, 1) = h * (1.0 - b);
  m(7, 1) = b * h;

  m(2, 2) = (1.0 - a) * (1.0 - h);
  m(4, 2) = a * (1.0 - h);
  m(6, 2) = h * (1.0 - a);
  m(7, 2) = a * h;

  m(3, 3) = 1.0 - (a + b);
  m(5, 3) = a;
  m(6, 3) = b;

  m(4, 4) = 1.0 - h;
  m(7, 4) = h;

  m(5, 5) = 1.0 - b;
  m(7, 5) = b;

  m(6, 6) = 1.0 - a;
  m(7, 6) = a;

  m(7, 7) = 1.0;
  return TransitionMatrix(m);
}

TransitionMatrix dark_count_matrix(const DarkCountRates& d) {
  const double dh = d.d_h();
  const double da = d.d_a();
  const double db = d.d_b();
  const double qh = 1.0 - dh;
  const double qa = 1.0 - da;
  const double qb = 1.0 - db;

  Matrix8 m = Matrix8::Zero();
  m(0, 0) = qa * qb * qh;
  m(1, 0) = da * qb * qh;
  m(2, 0) = qa * db * qh;
  m(3, 0) = qa * qb * dh;
  m(4, 0) = da * db * qh;
  m(5, 0) = da * qb * dh;
  m(6, 0) = qa * db * dh;
  m(7, 0) = da * db * dh;

  m(1, 1) = qb * qh;
  m(4, 1) = db * qh;
  m(5, 1) = qb * dh;
  m(7, 1) = db * dh;

  m(2, 2) = qa * qh;
  m(4, 2) = da * qh;
  m(6, 2) = qa * dh;
  m(7, 2) = da * dh;

  m(3, 3) = qa * qb;
  m(5, 3) = da * qb;
  m(6, 3) = qa * db;
  m(7, 3) = da * db;

  m(4, 4) = qh;
  m(7, 4) = dh;

  m(5, 5) = qb;
  m(7, 5) = db;

  m(6, 6) = qa;
  m(7, 6) = da;

  m(7, 7) = 1.0;
  return TransitionMatrix(m);
}

TransitionMatrix correlated_detection_matrix(const ChannelTransmissions& t,
                                             double c) {
  if (!std::isfinite(c) || c <= 0.0 || c > 1.0) {
    throw InvalidArgument("correlation factor c must lie in (0, 1], got " +
                          std::to_string(c));
  }
  if (c == 1.0) return detection_matrix(t);

  const double h = t.eta_h();
  const double a = t.eta_a();
  const double b = t.eta_b();

  Matrix8 m = Matrix8::Zero();
  m(0, 0) = 1.0 - h + (a + b) * (c * h - 1.0);
  m(1, 0) = a * (1.0 - c * h);
  m(2, 0) = b * (1.0 - c * h);
  m(3, 0) = h * (1.0 - c * (a + b));
  m(5, 0) = c * a * h;
  m(6, 0) = c * b * h;

  m(1, 1) = 1.0 - b + h * (c * b - 1.0);
  m(4, 1) = b * (1.0 - c * h);
  m(5, 1) = h * (1.0 - c * b);
  m(7, 1) = c * b * h;

  m(2, 2) = 1.0 - a + h * (c * a - 1.0);
  m(4, 2) = a * (1.0 - c * h);
  m(6, 2) = h * (1.0 - c * a);
  m(7, 2) = c * a * h;

  m(3, 3) = 1.0 - (a + b);
  m(5, 3) = a;
  m(6, 3) = b;

  m(4, 4) = 1.0 - h;
  m(7, 4) = h;

  m(5, 5) = 1.0 - b;
  m(7, 5) = b;

  m(6, 6) = 1.0 - a;
  m(7, 6) = a;

  m(7, 7) = 1.0;

  // Rounding can leave a legitimately-zero entry at -1e-17.
  constexpr double slack = 1e-15;
  if (m.minCoeff() < -slack) {
    throw InvalidArgument(
        "correlation factor c with these transmissions gives a negative "
        "transition probability");
  }
  return TransitionMatrix(m.cwiseMax(0.0));
}

}  // namespace pairstat
