#pragma once

#include <filesystem>
#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

namespace kessence {

// Shortest decimal that parses back to the same double. Non-finite values
// print as NAN, INF and -INF.
std::string format_double(double value);

// Comma-separated table built in memory, one header line then rows.
class CsvTable {
public:
  explicit CsvTable(std::vector<std::string> header);

  const std::vector<std::string>& header() const { return header_; }
  std::size_t rows() const { return rows_; }

  // Cells are preformatted; numbers go through format_double. Throws
  // std::invalid_argument on a width mismatch or a cell containing a comma,
  // quote or newline.
  void add_row(const std::vector<std::string>& cells);

  const std::string& text() const { return text_; }

private:
  std::vector<std::string> header_;
  std::string text_;
  std::size_t rows_ = 0;
};

// Writes bytes exactly as given. Creates missing parent directories.
// Throws IoError on failure.
void write_text_file(const std::filesystem::path& path, std::string_view content);

// Throws IoError if the file cannot be read.
std::string read_text_file(const std::filesystem::path& path);

}  // namespace kessence
