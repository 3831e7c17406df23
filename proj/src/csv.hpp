// Copyright 2026 The TriggerForge Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef TRIGGERFORGE_SRC_CSV_HPP_
#define TRIGGERFORGE_SRC_CSV_HPP_

// Unquoted CSV: every field is comma-free by construction.

#include <string>
#include <string_view>
#include <vector>

#include "triggerforge/error.hpp"

namespace triggerforge::internal {

inline std::vector<std::string> SplitFields(std::string_view line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  for (;;) {
    std::size_t comma = line.find(',', start);
    fields.emplace_back(line.substr(start, comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

/// Rows after the header; each has exactly `columns` fields.
inline std::vector<std::vector<std::string>> ParseTable(std::string_view csv,
                                                        std::string_view header,
                                                        std::size_t columns) {
  std::vector<std::string_view> lines;
  while (!csv.empty()) {
    std::size_t nl = csv.find('\n');
    std::string_view line = csv.substr(0, nl);
    if (line.ends_with('\r')) line.remove_suffix(1);
    lines.push_back(line);
    if (nl == std::string_view::npos) break;
    csv.remove_prefix(nl + 1);
  }
  if (lines.empty() || lines.front() != header) {
    throw Error(ErrorKind::kSchemaMismatch,
                "expected header '" + std::string(header) + "'");
  }
  std::vector<std::vector<std::string>> rows;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    auto fields = SplitFields(lines[i]);
    if (fields.size() != columns) {
      throw Error(ErrorKind::kSchemaMismatch,
                  "line " + std::to_string(i + 1) + " has " +
                      std::to_string(fields.size()) + " columns, expected " +
                      std::to_string(columns));
    }
    rows.push_back(std::move(fields));
  }
  return rows;
}

/// Replaces characters that would break the unquoted format.
inline std::string SanitizeField(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    if (c == ',') c = ';';
    if (c == '\n' || c == '\r') c = ' ';
  }
  return out;
}

}  // namespace triggerforge::internal

#endif  // TRIGGERFORGE_SRC_CSV_HPP_
