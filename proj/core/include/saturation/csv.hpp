#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace saturation::csv {

struct Record {
  std::size_t line = 0;  // 1-based source line where the record starts
  std::vector<std::string> fields;
};

// Splits comma-separated UTF-8 text into records. Double-quoted fields
// (with "" escapes) may contain commas and newlines. A leading BOM, CRLF
// line endings and blank lines are ignored.
std::vector<Record> read(std::string_view text);

// Quotes a field when it contains a comma, quote or newline.
std::string escape(std::string_view field);

}  // namespace saturation::csv
