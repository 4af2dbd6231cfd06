#include "rezoner/csv.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "rezoner/errors.hpp"

namespace rezoner {

namespace {

std::string trim(std::string s) {
  const auto first = s.find_first_not_of(" \t");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t");
  return s.substr(first, last - first + 1);
}

std::vector<std::vector<std::string>> split_records(std::string_view text, const std::string& source) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> record;
  std::string field;
  bool quoted = false;
  bool field_started = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field.push_back(c);
      }
      continue;
    }
    if (c == '"' && !field_started) {
      quoted = true;
      field_started = true;
    } else if (c == ',') {
      record.push_back(trim(std::move(field)));
      field.clear();
      field_started = false;
    } else if (c == '\n' || c == '\r') {
      if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
      record.push_back(trim(std::move(field)));
      field.clear();
      field_started = false;
      if (!(record.size() == 1 && record[0].empty())) records.push_back(std::move(record));
      record.clear();
    } else {
      field.push_back(c);
      if (c != ' ' && c != '\t') field_started = true;
    }
  }
  if (quoted) throw InputError(source + ": unterminated quoted field");
  if (field_started || !field.empty() || !record.empty()) {
    record.push_back(trim(std::move(field)));
    if (!(record.size() == 1 && record[0].empty())) records.push_back(std::move(record));
  }
  return records;
}

}  // namespace

CsvTable CsvTable::parse(std::string_view text, const std::string& source) {
  // Tolerate a UTF-8 byte order mark.
  if (text.size() >= 3 && text.substr(0, 3) == "\xEF\xBB\xBF") text.remove_prefix(3);
  CsvTable t;
  t.source_ = source;
  auto records = split_records(text, source);
  if (records.empty()) throw InputError(source + ": empty CSV (a header row is required)");
  t.header_ = std::move(records.front());
  for (std::size_t r = 1; r < records.size(); ++r) {
    if (records[r].size() != t.header_.size()) {
      throw InputError(source + ": row " + std::to_string(r + 1) + " has " + std::to_string(records[r].size()) +
                       " fields, header has " + std::to_string(t.header_.size()));
    }
    t.rows_.push_back(std::move(records[r]));
  }
  return t;
}

CsvTable CsvTable::read(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str(), path.string());
}

std::size_t CsvTable::column(std::string_view name) const {
  for (std::size_t i = 0; i < header_.size(); ++i) {
    if (header_[i] == name) return i;
  }
  throw InputError(source_ + ": missing column '" + std::string(name) + "'");
}

double CsvTable::number(std::size_t row, std::size_t col) const {
  const auto& s = rows_[row][col];
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw InputError(source_ + ": row " + std::to_string(row + 2) + ", column '" + header_[col] +
                     "': not a number: '" + s + "'");
  }
  return v;
}

std::int64_t CsvTable::integer(std::size_t row, std::size_t col) const {
  const auto& s = rows_[row][col];
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw InputError(source_ + ": row " + std::to_string(row + 2) + ", column '" + header_[col] +
                     "': not an integer: '" + s + "'");
  }
  return v;
}

std::string csv_escape(std::string_view field) {
  if (field.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

}  // namespace rezoner
