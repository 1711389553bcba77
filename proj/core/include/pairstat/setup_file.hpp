#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "pairstat/types.hpp"

namespace pairstat {

/*
 * Flat key-value setup description:
 *
 *   # comment
 *   eta_h = 0.1212
 *   eta_a = 0.0145
 *   eta_b = 0.0162
 *   d_h = 2.5e-7
 *   d_a = 2.87e-4
 *   d_b = 3.84e-4
 *   c = 1
 *
 * Darks default to 0 and c to 1; transmissions are required when a model
 * is built. Unknown keys are a parse error.
 */
struct SetupConfig {
  std::optional<double> eta_h, eta_a, eta_b;
  std::optional<double> d_h, d_a, d_b;
  std::optional<double> c;

  /// Fields set in `overrides` replace ours.
  void apply(const SetupConfig& overrides);

  DarkCountRates darks() const;
  /// Throws InvalidArgument when a transmission is missing.
  SetupModel model() const;
};

SetupConfig read_setup_config(std::istream& in,
                              const std::string& source = "<input>");
SetupConfig read_setup_config(const std::filesystem::path& path);

std::string format_setup(const SetupModel& setup);

}  // namespace pairstat
