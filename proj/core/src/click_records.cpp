#include "pairstat/click_records.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <string_view>

#include "pairstat/error.hpp"

namespace pairstat {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

bool parse_bit(std::string_view field, bool& bit) {
  field = trim(field);
  if (field == "0") {
    bit = false;
    return true;
  }
  if (field == "1") {
    bit = true;
    return true;
  }
  return false;
}

}  // namespace

ClickCounts read_click_records(std::istream& in, const std::string& source) {
  ClickCounts counts;
  std::string line;
  std::size_t line_no = 0;
  bool seen_content = false;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view text = trim(line);
    if (text.empty() || text.front() == '#') continue;
    if (!seen_content) {
      seen_content = true;
      std::string compact;
      for (char ch : text) {
        if (ch != ' ' && ch != '\t') compact.push_back(ch);
      }
      if (compact == "a,b,h") continue;
    }

    const auto c1 = text.find(',');
    const auto c2 = c1 == std::string_view::npos ? c1 : text.find(',', c1 + 1);
    if (c2 == std::string_view::npos ||
        text.find(',', c2 + 1) != std::string_view::npos) {
      throw ParseError(source, line_no,
                       "expected three comma-separated fields a,b,h");
    }
    DetectorOutcome o;
    if (!parse_bit(text.substr(0, c1), o.a_clicked) ||
        !parse_bit(text.substr(c1 + 1, c2 - c1 - 1), o.b_clicked) ||
        !parse_bit(text.substr(c2 + 1), o.h_clicked)) {
      throw ParseError(source, line_no, "click fields must be 0 or 1");
    }
    ++counts[o];
  }
  if (in.bad()) throw ParseError(source, 0, "read error");
  if (counts.n_windows() == 0) {
    throw ParseError(source, 0, "no click records");
  }
  return counts;
}

ClickCounts read_click_records(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path.string(), 0, "cannot open file");
  return read_click_records(in, path.string());
}

ClickRecordWriter::ClickRecordWriter(std::ostream& out, bool header)
    : out_(out) {
  if (header) out_ << "a,b,h\n";
}

void ClickRecordWriter::write(DetectorOutcome o) {
  const char line[] = {o.a_clicked ? '1' : '0', ',', o.b_clicked ? '1' : '0',
                       ',', o.h_clicked ? '1' : '0', '\n'};
  out_.write(line, sizeof line);
}

void write_click_records(std::ostream& out, const ClickCounts& counts,
                         bool header) {
  ClickRecordWriter writer(out, header);
  for (std::size_t i = 0; i < kOutcomeCount; ++i) {
    const auto o = DetectorOutcome::from_index(i);
    for (std::uint64_t k = 0; k < counts.outcome_counts[i]; ++k) {
      writer.write(o);
    }
  }
}

}  // namespace pairstat
