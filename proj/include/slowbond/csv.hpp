#ifndef SLOWBOND_CSV_HPP
#define SLOWBOND_CSV_HPP

#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

namespace slowbond {

/// Full double precision (17 significant digits), the on-disk number format.
std::string g17(double v);

/// CSV with a `# key=value` metadata prologue, then a header row, then rows.
class CsvBuilder {
 public:
  void metadata(const std::string& key, const std::string& value);
  void metadata(const std::string& key, double value);
  void metadata(const std::string& key, std::int64_t value);
  void metadata(const std::string& key, std::uint64_t value);
  void header(const std::vector<std::string>& columns);
  void row(const std::vector<double>& values);
  void raw_row(const std::string& line);

  std::string str() const { return out_.str(); }

 private:
  std::ostringstream out_;
  bool header_written_ = false;
};

void write_text_file(const std::string& path, const std::string& content);

}  // namespace slowbond

#endif
