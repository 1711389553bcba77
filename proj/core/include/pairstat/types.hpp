#pragma once

#include <array>
#include <cstddef>
#include <cstdint>

#include <Eigen/Core>

namespace pairstat {

inline constexpr std::size_t kOutcomeCount = 8;

using Vector8 = Eigen::Matrix<double, 8, 1>;
using Matrix8 = Eigen::Matrix<double, 8, 8>;

/*
 * Joint click state of the three detectors for one measurement window.
 *
 * The canonical index ordering, used for every vector, matrix and file in
 * this library, is
 *
 *   0: none   1: A   2: B   3: H   4: AB   5: AH   6: BH   7: ABH
 *
 * i.e. no clicks, the three singles, then AB, AH, BH and the triple.
 */
struct DetectorOutcome {
  bool a_clicked = false;
  bool b_clicked = false;
  bool h_clicked = false;

  constexpr std::size_t index() const noexcept {
    constexpr std::array<std::size_t, 8> by_bits = {0, 1, 2, 4, 3, 5, 6, 7};
    return by_bits[(a_clicked ? 1u : 0u) | (b_clicked ? 2u : 0u) |
                   (h_clicked ? 4u : 0u)];
  }

  static constexpr DetectorOutcome from_index(std::size_t index) noexcept {
    constexpr std::array<DetectorOutcome, 8> table = {{
        {false, false, false},
        {true, false, false},
        {false, true, false},
        {false, false, true},
        {true, true, false},
        {true, false, true},
        {false, true, true},
        {true, true, true},
    }};
    return table[index & 7u];
  }

  /// Union of two click states; clicks never un-click.
  constexpr DetectorOutcome merged(DetectorOutcome other) const noexcept {
    return {a_clicked || other.a_clicked, b_clicked || other.b_clicked,
            h_clicked || other.h_clicked};
  }

  friend constexpr bool operator==(DetectorOutcome,
                                   DetectorOutcome) noexcept = default;
};

/// Probabilities of the eight detector outcomes, canonical ordering.
class ProbabilityVector {
 public:
  static constexpr double kSumTolerance = 1e-12;

  /// Validates entries in [0, 1] and unit sum within kSumTolerance.
  explicit ProbabilityVector(const Vector8& entries);
  explicit ProbabilityVector(const std::array<double, 8>& entries);

  /// P0: nothing has clicked.
  static ProbabilityVector initial();

  double operator[](std::size_t index) const { return entries_[index]; }
  double operator[](DetectorOutcome outcome) const {
    return entries_[outcome.index()];
  }
  const Vector8& entries() const noexcept { return entries_; }

 private:
  Vector8 entries_;
};

class ChannelTransmissions {
 public:
  /// Rejects values outside [0, 1] and eta_a + eta_b > 1.
  ChannelTransmissions(double eta_h, double eta_a, double eta_b);

  double eta_h() const noexcept { return eta_h_; }
  double eta_a() const noexcept { return eta_a_; }
  double eta_b() const noexcept { return eta_b_; }

  /// Same channel with every transmission multiplied by `factor`.
  ChannelTransmissions scaled(double factor) const;

 private:
  double eta_h_;
  double eta_a_;
  double eta_b_;
};

/// Dark-count probability per measurement window, each in [0, 1).
class DarkCountRates {
 public:
  DarkCountRates() = default;
  DarkCountRates(double d_h, double d_a, double d_b);

  double d_h() const noexcept { return d_h_; }
  double d_a() const noexcept { return d_a_; }
  double d_b() const noexcept { return d_b_; }

 private:
  double d_h_ = 0.0;
  double d_a_ = 0.0;
  double d_b_ = 0.0;
};

/// Transmissions, darks and the spectral-correlation factor c in (0, 1].
class SetupModel {
 public:
  SetupModel(ChannelTransmissions transmissions, DarkCountRates darks,
             double c = 1.0);

  const ChannelTransmissions& transmissions() const noexcept {
    return transmissions_;
  }
  const DarkCountRates& darks() const noexcept { return darks_; }
  double c() const noexcept { return c_; }

 private:
  ChannelTransmissions transmissions_;
  DarkCountRates darks_;
  double c_;
};

}  // namespace pairstat
