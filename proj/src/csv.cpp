#include "quadfield/csv.hpp"

#include <cstdio>
#include <stdexcept>

namespace quadfield {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

CsvWriter::CsvWriter(std::ostream& os, std::initializer_list<std::string_view> header)
    : os_(os), columns_(header.size()) {
  bool first = true;
  for (auto h : header) {
    if (!first) os_ << ',';
    os_ << h;
    first = false;
  }
  os_ << '\n';
}

CsvWriter::CsvWriter(std::ostream& os, const std::vector<std::string>& header)
    : os_(os), columns_(header.size()) {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i) os_ << ',';
    os_ << header[i];
  }
  os_ << '\n';
}

void CsvWriter::row(std::initializer_list<double> values) {
  row(std::vector<double>(values));
}

void CsvWriter::row(const std::vector<double>& values) {
  if (values.size() != columns_) throw std::logic_error("csv row width mismatch");
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) os_ << ',';
    os_ << format_double(values[i]);
  }
  os_ << '\n';
}

void CsvWriter::row(std::string_view label, std::initializer_list<double> values) {
  if (values.size() + 1 != columns_) throw std::logic_error("csv row width mismatch");
  os_ << label;
  for (double v : values) os_ << ',' << format_double(v);
  os_ << '\n';
}

}  // namespace quadfield
