#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace rezoner {

/// Header-keyed CSV table (RFC 4180 quoting, LF or CRLF line endings).
class CsvTable {
 public:
  static CsvTable parse(std::string_view text, const std::string& source = "<memory>");
  static CsvTable read(const std::filesystem::path& path);

  const std::vector<std::string>& header() const { return header_; }
  std::size_t rows() const { return rows_.size(); }

  /// Throws InputError if the column is absent.
  std::size_t column(std::string_view name) const;
  const std::string& cell(std::size_t row, std::size_t col) const { return rows_[row][col]; }

  double number(std::size_t row, std::size_t col) const;
  std::int64_t integer(std::size_t row, std::size_t col) const;

  const std::string& source() const { return source_; }

 private:
  std::string source_;
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

/// Quotes a field only when it needs quoting.
std::string csv_escape(std::string_view field);

}  // namespace rezoner
