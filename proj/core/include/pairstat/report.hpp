#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "pairstat/characterization.hpp"
#include "pairstat/counts.hpp"
#include "pairstat/error.hpp"

namespace pairstat {

using SettingValue = std::variant<bool, std::int64_t, double, std::string>;

struct IngestSummary {
  std::uint64_t total_periods = 0;
  std::uint64_t discarded_windows = 0;
  std::uint64_t multi_tag_windows = 0;
};

struct ErrorInfo {
  ErrorKind kind = ErrorKind::numerical;
  std::string message;
};

/*
 * Result of one CLI run. Serialized as JSON with fixed field names; every
 * floating-point result is an object {"value": x, "std_error": s} or
 * {"value": x, "exact": true} (deterministic given the inputs). Keys are
 * emitted in sorted order, so equal reports serialize to equal bytes.
 */
struct RunReport {
  std::string command;
  std::map<std::string, SettingValue> settings;
  std::optional<ClickCounts> counts;
  std::optional<IngestSummary> ingest;
  std::optional<MeasuredProbabilities> measured;
  /// Measured G = p_AH / (p_A p_H).
  std::optional<Estimate> correlation_strength;
  std::optional<CharacterizedSource> source;
  std::optional<BrightnessBound> bound;
  std::vector<HeraldedPrediction> predictions;
  std::vector<std::string> warnings;
  std::optional<ErrorInfo> error;
};

std::string to_json(const RunReport& report);

}  // namespace pairstat
