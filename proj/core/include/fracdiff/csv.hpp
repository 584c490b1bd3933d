// Copyright the fracdiff authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <variant>
#include <vector>

namespace fracdiff {

using CsvValue = std::variant<long long, double, std::string>;

/// Doubles rendered with 17 significant digits (round-trip exact).
std::string format_double(double v);

/// Plain CSV with '#'-prefixed comment lines before the header row.
class CsvDocument {
 public:
  void add_comment(const std::string& line);
  void set_header(std::vector<std::string> columns);
  void add_row(std::vector<CsvValue> values);

  std::string to_string() const;
  /// Writes to the path, or to stdout when the path is empty.
  void write(const std::string& path) const;

 private:
  std::vector<std::string> comments_;
  std::vector<std::string> header_;
  std::vector<std::vector<CsvValue>> rows_;
};

}  // namespace fracdiff
