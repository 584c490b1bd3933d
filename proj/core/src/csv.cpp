// Copyright the fracdiff authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#include "fracdiff/csv.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

namespace fracdiff {

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void CsvDocument::add_comment(const std::string& line) {
  comments_.push_back(line);
}

void CsvDocument::set_header(std::vector<std::string> columns) {
  header_ = std::move(columns);
}

void CsvDocument::add_row(std::vector<CsvValue> values) {
  if (!header_.empty() && values.size() != header_.size()) {
    throw std::invalid_argument("csv row width does not match the header");
  }
  rows_.push_back(std::move(values));
}

std::string CsvDocument::to_string() const {
  std::ostringstream out;
  for (const auto& c : comments_) out << "# " << c << "\n";
  for (std::size_t i = 0; i < header_.size(); ++i) {
    out << (i ? "," : "") << header_[i];
  }
  if (!header_.empty()) out << "\n";
  for (const auto& row : rows_) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out << ",";
      if (const auto* n = std::get_if<long long>(&row[i])) {
        out << *n;
      } else if (const auto* d = std::get_if<double>(&row[i])) {
        out << format_double(*d);
      } else {
        out << std::get<std::string>(row[i]);
      }
    }
    out << "\n";
  }
  return out.str();
}

void CsvDocument::write(const std::string& path) const {
  if (path.empty()) {
    std::cout << to_string();
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << to_string();
  if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

}  // namespace fracdiff
