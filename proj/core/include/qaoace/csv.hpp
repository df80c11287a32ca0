#pragma once

#include <initializer_list>
#include <ostream>
#include <string>
#include <string_view>

namespace qaoace {

/// Shortest decimal text that round-trips to the same double, with '.' as
/// the separator regardless of locale.
std::string format_double(double value);

/// Minimal comma-separated writer: LF line endings, no quoting (fields never
/// contain commas).
class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& os) : os_(os) {}

  void header(std::initializer_list<std::string_view> columns);

  CsvWriter& field(std::string_view text);
  CsvWriter& field(double value);
  CsvWriter& field(long long value);
  CsvWriter& field(unsigned long long value);
  CsvWriter& field(int value) { return field(static_cast<long long>(value)); }
  CsvWriter& field(unsigned long value) { return field(static_cast<unsigned long long>(value)); }
  CsvWriter& field(long value) { return field(static_cast<long long>(value)); }
  CsvWriter& field(bool value) { return field(std::string_view(value ? "1" : "0")); }
  void end_row();

 private:
  std::ostream& os_;
  bool at_row_start_ = true;
};

}  // namespace qaoace
