#include "qaoace/csv.hpp"

#include <array>
#include <charconv>
#include <cmath>

namespace qaoace {

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  std::array<char, 32> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), end);
}

void CsvWriter::header(std::initializer_list<std::string_view> columns) {
  for (auto c : columns) field(c);
  end_row();
}

CsvWriter& CsvWriter::field(std::string_view text) {
  if (!at_row_start_) os_ << ',';
  os_ << text;
  at_row_start_ = false;
  return *this;
}

CsvWriter& CsvWriter::field(double value) { return field(std::string_view(format_double(value))); }

CsvWriter& CsvWriter::field(long long value) { return field(std::string_view(std::to_string(value))); }

CsvWriter& CsvWriter::field(unsigned long long value) {
  return field(std::string_view(std::to_string(value)));
}

void CsvWriter::end_row() {
  os_ << '\n';
  at_row_start_ = true;
}

}  // namespace qaoace
