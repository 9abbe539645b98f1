#include "slowbond/csv.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace slowbond {

std::string g17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void CsvBuilder::metadata(const std::string& key, const std::string& value) {
  if (header_written_) throw std::logic_error("CsvBuilder: metadata after header");
  out_ << "# " << key << "=" << value << "\n";
}

void CsvBuilder::metadata(const std::string& key, double value) { metadata(key, g17(value)); }

void CsvBuilder::metadata(const std::string& key, std::int64_t value) {
  metadata(key, std::to_string(value));
}

void CsvBuilder::metadata(const std::string& key, std::uint64_t value) {
  metadata(key, std::to_string(value));
}

void CsvBuilder::header(const std::vector<std::string>& columns) {
  for (size_t i = 0; i < columns.size(); ++i) out_ << (i ? "," : "") << columns[i];
  out_ << "\n";
  header_written_ = true;
}

void CsvBuilder::row(const std::vector<double>& values) {
  for (size_t i = 0; i < values.size(); ++i) out_ << (i ? "," : "") << g17(values[i]);
  out_ << "\n";
}

void CsvBuilder::raw_row(const std::string& line) { out_ << line << "\n"; }

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  f << content;
  if (!f) throw std::runtime_error("write failed: " + path);
}

}  // namespace slowbond
