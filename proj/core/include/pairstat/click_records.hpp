#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "pairstat/counts.hpp"
#include "pairstat/types.hpp"

namespace pairstat {

/*
 * Click-record CSV: one line per retained window, fields `a,b,h` each 0 or 1.
 * An optional `a,b,h` header may precede the records; blank lines and lines
 * starting with '#' are skipped. Throws ParseError with the line number on
 * the first malformed line, or for a file without records.
 */
ClickCounts read_click_records(std::istream& in,
                               const std::string& source = "<input>");
ClickCounts read_click_records(const std::filesystem::path& path);

/// Streams one record per window.
class ClickRecordWriter {
 public:
  explicit ClickRecordWriter(std::ostream& out, bool header = true);
  void write(DetectorOutcome outcome);

 private:
  std::ostream& out_;
};

/// Expands the histogram into records, in canonical outcome order.
void write_click_records(std::ostream& out, const ClickCounts& counts,
                         bool header = true);

}  // namespace pairstat
