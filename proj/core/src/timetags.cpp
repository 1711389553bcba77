#include "pairstat/timetags.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <vector>

#include "pairstat/error.hpp"

namespace pairstat {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::optional<TimetagChannel> channel_from(std::string_view name) {
  std::string upper;
  for (char ch : name) {
    upper.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(ch))));
  }
  if (upper == "CLOCK") return TimetagChannel::clock;
  if (upper == "H") return TimetagChannel::h;
  if (upper == "A") return TimetagChannel::a;
  if (upper == "B") return TimetagChannel::b;
  return std::nullopt;
}

struct DetectorTrack {
  const std::vector<std::int64_t>* tags = nullptr;
  std::size_t next = 0;  // first tag not yet before the current window
  std::optional<std::int64_t> last_before;

  // Advances to window [lo, hi]; returns the number of tags inside it.
  std::size_t enter(std::int64_t lo, std::int64_t hi) {
    const auto& t = *tags;
    while (next < t.size() && t[next] < lo) last_before = t[next++];
    std::size_t k = next;
    while (k < t.size() && t[k] <= hi) ++k;
    return k - next;
  }
};

}  // namespace

TimetagChannel parse_channel(std::string_view name) {
  if (auto c = channel_from(trim(name))) return *c;
  throw InvalidArgument("unknown timetag channel '" + std::string(name) + "'");
}

const char* to_string(TimetagChannel channel) {
  switch (channel) {
    case TimetagChannel::clock: return "CLOCK";
    case TimetagChannel::h: return "H";
    case TimetagChannel::a: return "A";
    case TimetagChannel::b: return "B";
  }
  return "?";
}

void WindowSpec::validate() const {
  if (width_ps <= 0 || width_ps > period_ps) {
    throw InvalidArgument("window width must satisfy 0 < width <= period");
  }
}

TimetagIngestResult ingest_timetags(std::istream& in, const WindowSpec& window,
                                    const DeadTimes& dead,
                                    const std::string& source) {
  window.validate();
  if (dead.a_ps < 0 || dead.b_ps < 0 || dead.h_ps < 0) {
    throw InvalidArgument("dead times must be >= 0");
  }

  // Indexed by TimetagChannel.
  std::array<std::vector<std::int64_t>, 4> tags;
  std::string line;
  std::size_t line_no = 0;
  bool seen_content = false;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view text = trim(line);
    if (text.empty() || text.front() == '#') continue;
    const auto comma = text.find(',');
    if (comma == std::string_view::npos) {
      throw ParseError(source, line_no, "expected channel,timestamp_ps");
    }
    const std::string_view name = trim(text.substr(0, comma));
    const std::string_view stamp = trim(text.substr(comma + 1));
    const auto channel = channel_from(name);
    if (!seen_content) {
      seen_content = true;
      if (!channel && name == "channel") continue;
    }
    if (!channel) {
      throw ParseError(source, line_no,
                       "unknown channel '" + std::string(name) + "'");
    }
    std::int64_t t = 0;
    const auto [ptr, ec] =
        std::from_chars(stamp.data(), stamp.data() + stamp.size(), t);
    if (ec != std::errc() || ptr != stamp.data() + stamp.size()) {
      throw ParseError(source, line_no, "timestamp must be an integer (ps)");
    }
    auto& list = tags[static_cast<std::size_t>(*channel)];
    if (!list.empty() && t < list.back()) {
      throw ParseError(source, line_no,
                       std::string("timestamps on channel ") +
                           to_string(*channel) + " decrease");
    }
    list.push_back(t);
  }
  if (in.bad()) throw ParseError(source, 0, "read error");

  const auto& clocks = tags[static_cast<std::size_t>(TimetagChannel::clock)];
  if (clocks.empty()) throw ParseError(source, 0, "no CLOCK channel tags");

  DetectorTrack a{&tags[static_cast<std::size_t>(TimetagChannel::a)]};
  DetectorTrack b{&tags[static_cast<std::size_t>(TimetagChannel::b)]};
  DetectorTrack h{&tags[static_cast<std::size_t>(TimetagChannel::h)]};

  TimetagIngestResult result;
  for (const std::int64_t clock : clocks) {
    const std::int64_t lo = window.start(clock);
    const std::int64_t hi = window.end(clock);
    const std::size_t na = a.enter(lo, hi);
    const std::size_t nb = b.enter(lo, hi);
    const std::size_t nh = h.enter(lo, hi);
    ++result.total_periods;

    if (in_dead_time(a.last_before, dead.a_ps, lo) ||
        in_dead_time(b.last_before, dead.b_ps, lo) ||
        in_dead_time(h.last_before, dead.h_ps, lo)) {
      ++result.discarded_windows;
      continue;
    }
    ++result.counts[DetectorOutcome{na > 0, nb > 0, nh > 0}];
    if (na > 1 || nb > 1 || nh > 1) ++result.multi_tag_windows;
  }
  return result;
}

TimetagIngestResult ingest_timetags(const std::filesystem::path& path,
                                    const WindowSpec& window,
                                    const DeadTimes& dead) {
  std::ifstream in(path);
  if (!in) throw ParseError(path.string(), 0, "cannot open file");
  return ingest_timetags(in, window, dead, path.string());
}

TimetagWriter::TimetagWriter(std::ostream& out, const WindowSpec& window,
                             const DeadTimes& dead, bool header)
    : out_(out), window_(window), dead_(dead) {
  window_.validate();
  if (header) out_ << "channel,timestamp_ps\n";
}

void TimetagWriter::emit(TimetagChannel channel, std::int64_t t) {
  out_ << to_string(channel) << ',' << t << '\n';
}

void TimetagWriter::write_window(DetectorOutcome o) {
  const auto clock =
      static_cast<std::int64_t>(next_period_++) * window_.period_ps;
  const std::int64_t lo = window_.start(clock);
  const std::int64_t centre = clock + window_.offset_ps;

  const bool dead_a = in_dead_time(last_a_, dead_.a_ps, lo);
  const bool dead_b = in_dead_time(last_b_, dead_.b_ps, lo);
  const bool dead_h = in_dead_time(last_h_, dead_.h_ps, lo);

  emit(TimetagChannel::clock, clock);
  if (o.h_clicked && !dead_h) {
    emit(TimetagChannel::h, centre);
    last_h_ = centre;
  }
  if (o.a_clicked && !dead_a) {
    emit(TimetagChannel::a, centre);
    last_a_ = centre;
  }
  if (o.b_clicked && !dead_b) {
    emit(TimetagChannel::b, centre);
    last_b_ = centre;
  }

  ++truth_.total_periods;
  if (dead_a || dead_b || dead_h) {
    ++truth_.discarded_windows;
  } else {
    ++truth_.counts[o];
  }
}

}  // namespace pairstat
