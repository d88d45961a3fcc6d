#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace prwf::bench {

/// Shortest decimal string that parses back to the same double.
std::string format_double(double v);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void add_row(std::vector<std::string> row);
  /// Header line then rows, comma separated, LF line endings.
  std::string str() const;
};

/// Writes `text` to `path`, or stdout when `path` is empty. Throws IoError.
void write_text(const std::string& path, const std::string& text);

}  // namespace prwf::bench
