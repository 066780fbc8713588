#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace lshe {

// One logical row of a delimited file. `line` is the 1-based physical line on
// which the row starts.
struct DelimitedRow {
  std::size_t line = 0;
  std::vector<std::string> cells;
};

// RFC 4180 style reader: quoted cells may contain the delimiter, doubled
// quotes and newlines. CRLF line endings and a leading UTF-8 BOM are accepted.
// Blank lines are skipped.
class DelimitedReader {
 public:
  DelimitedReader(std::istream& in, char delimiter);

  bool next(DelimitedRow& row);

 private:
  std::istream& in_;
  char delimiter_;
  std::size_t line_ = 0;
  bool first_ = true;
};

// Quotes a cell if it contains the delimiter, a quote or a line break.
std::string quote_cell(std::string_view cell, char delimiter);

}  // namespace lshe
