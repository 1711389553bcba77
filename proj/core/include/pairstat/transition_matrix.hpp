#pragma once

#include <cstddef>

#include "pairstat/types.hpp"

namespace pairstat {

/*
 * Column-stochastic 8x8 matrix over detector outcomes. Entry (row, col) is
 * the probability of moving from outcome `col` to outcome `row`. Indices are
 * 0-based in the canonical outcome ordering (see DetectorOutcome).
 */
class TransitionMatrix {
 public:
  explicit TransitionMatrix(const Matrix8& entries) : m_(entries) {}

  static TransitionMatrix identity() {
    return TransitionMatrix(Matrix8::Identity());
  }

  double operator()(std::size_t row, std::size_t col) const {
    return m_(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col));
  }
  const Matrix8& matrix() const noexcept { return m_; }

  TransitionMatrix operator*(const TransitionMatrix& rhs) const {
    return TransitionMatrix(m_ * rhs.m_);
  }
  Vector8 operator*(const Vector8& v) const { return m_ * v; }

 private:
  Matrix8 m_;
};

/// Transitions caused by a single photon pair.
TransitionMatrix detection_matrix(const ChannelTransmissions& t);

/// Transitions caused by detector dark counts in one window.
TransitionMatrix dark_count_matrix(const DarkCountRates& d);

/*
 * Single-pair transitions when spectral filtering lowers the H-A and H-B
 * coincidence probabilities to c*eta_h*eta_x while leaving singles at eta.
 * c == 1 reproduces detection_matrix(t) exactly. Throws InvalidArgument for
 * c outside (0, 1] or any negative entry.
 */
TransitionMatrix correlated_detection_matrix(const ChannelTransmissions& t,
                                             double c);

}  // namespace pairstat
