#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>

#include "pairstat/counts.hpp"
#include "pairstat/types.hpp"

namespace pairstat {

enum class TimetagChannel { clock, h, a, b };

TimetagChannel parse_channel(std::string_view name);
const char* to_string(TimetagChannel channel);

struct TimetagRecord {
  TimetagChannel channel = TimetagChannel::clock;
  std::int64_t timestamp_ps = 0;
};

/// Acceptance window relative to each clock tag, all in picoseconds.
struct WindowSpec {
  std::int64_t period_ps = 0;
  std::int64_t width_ps = 0;
  std::int64_t offset_ps = 0;

  /// Throws InvalidArgument unless 0 < width <= period.
  void validate() const;

  /// Closed window [start, end] for the clock tag at `clock_ps`.
  std::int64_t start(std::int64_t clock_ps) const {
    return clock_ps + offset_ps - width_ps / 2;
  }
  std::int64_t end(std::int64_t clock_ps) const {
    return start(clock_ps) + width_ps;
  }
};

/// Dead time after each detection; 0 disables gating on that channel.
/// The free-running H detector is not gated by default.
struct DeadTimes {
  std::int64_t a_ps = 0;
  std::int64_t b_ps = 0;
  std::int64_t h_ps = 0;
};

/// True when a detection at `last_ps` still blinds the detector at `at_ps`.
constexpr bool in_dead_time(std::optional<std::int64_t> last_ps,
                            std::int64_t dead_ps, std::int64_t at_ps) {
  return dead_ps > 0 && last_ps && *last_ps < at_ps &&
         at_ps < *last_ps + dead_ps;
}

struct TimetagIngestResult {
  ClickCounts counts;  // retained windows only
  std::uint64_t total_periods = 0;
  std::uint64_t discarded_windows = 0;
  /// Retained windows with two or more tags on one channel.
  std::uint64_t multi_tag_windows = 0;
};

/*
 * Timetag CSV `channel,timestamp_ps` (channel one of CLOCK, H, A, B; an
 * optional header line is allowed). Every clock tag opens one window; a
 * detector clicks in it if at least one of its tags falls inside. Windows
 * that open while a gated detector is still dead from an earlier detection
 * are discarded. Throws ParseError for malformed lines, decreasing
 * timestamps on a channel, or a missing clock channel.
 */
TimetagIngestResult ingest_timetags(std::istream& in, const WindowSpec& window,
                                    const DeadTimes& dead = {},
                                    const std::string& source = "<input>");
TimetagIngestResult ingest_timetags(const std::filesystem::path& path,
                                    const WindowSpec& window,
                                    const DeadTimes& dead = {});

/*
 * Serializes simulated windows as a timetag stream: a clock tag at
 * k * period and one tag per clicked detector at the window centre.
 * Detectors still inside their dead time do not produce tags, as in the
 * hardware. ground_truth() is what ingest_timetags must recover.
 */
class TimetagWriter {
 public:
  TimetagWriter(std::ostream& out, const WindowSpec& window,
                const DeadTimes& dead = {}, bool header = true);

  void write_window(DetectorOutcome outcome);
  const TimetagIngestResult& ground_truth() const noexcept { return truth_; }

 private:
  void emit(TimetagChannel channel, std::int64_t t);

  std::ostream& out_;
  WindowSpec window_;
  DeadTimes dead_;
  std::uint64_t next_period_ = 0;
  std::optional<std::int64_t> last_a_, last_b_, last_h_;
  TimetagIngestResult truth_;
};

}  // namespace pairstat
