#include "lshe/delimited.hpp"

#include <istream>
#include <stdexcept>

namespace lshe {

DelimitedReader::DelimitedReader(std::istream& in, char delimiter)
    : in_(in), delimiter_(delimiter) {}

bool DelimitedReader::next(DelimitedRow& row) {
  std::string line;
  while (true) {
    if (!std::getline(in_, line)) return false;
    ++line_;
    if (first_) {
      first_ = false;
      if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
    }
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) break;
  }

  row.line = line_;
  row.cells.clear();
  std::string cell;
  bool quoted = false;
  std::size_t i = 0;
  while (true) {
    if (i == line.size()) {
      if (!quoted) break;
      // Quoted cell spans a line break.
      std::string more;
      if (!std::getline(in_, more)) {
        throw std::runtime_error("line " + std::to_string(row.line) + ": unterminated quoted cell");
      }
      ++line_;
      if (!more.empty() && more.back() == '\r') more.pop_back();
      cell.push_back('\n');
      line = std::move(more);
      i = 0;
      continue;
    }
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cell.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cell.push_back(c);
      }
    } else if (c == '"' && cell.empty()) {
      quoted = true;
    } else if (c == delimiter_) {
      row.cells.push_back(std::move(cell));
      cell.clear();
    } else {
      cell.push_back(c);
    }
    ++i;
  }
  row.cells.push_back(std::move(cell));
  return true;
}

std::string quote_cell(std::string_view cell, char delimiter) {
  if (cell.find_first_of(std::string{delimiter, '"', '\n', '\r'}) == std::string_view::npos) {
    return std::string(cell);
  }
  std::string out;
  out.reserve(cell.size() + 2);
  out.push_back('"');
  for (char c : cell) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

}  // namespace lshe
