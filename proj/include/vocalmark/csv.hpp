// Copyright 2026 The vocalmark Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


// RFC 4180 style CSV: fields containing a comma, quote, CR or LF are quoted
// and quotes are doubled.

#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "vocalmark/error.hpp"

namespace vocalmark::csv {

using Row = std::vector<std::string>;

inline std::string escape(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += "\"\"";
    else out.push_back(c);
  }
  out.push_back('"');
  return out;
}

inline std::string write_row(const Row& row) {
  std::string out;
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (i) out.push_back(',');
    out += escape(row[i]);
  }
  out += "\r\n";
  return out;
}

inline std::string write(const std::vector<Row>& rows) {
  std::string out;
  for (const auto& r : rows) out += write_row(r);
  return out;
}

// Accepts LF or CRLF line ends; a trailing line end is optional.
inline std::vector<Row> parse(std::string_view text) {
  std::vector<Row> rows;
  if (text.starts_with("\xEF\xBB\xBF")) text.remove_prefix(3);
  Row row;
  std::string field;
  bool quoted = false, was_quoted = false, any = false;
  auto end_field = [&] {
    row.push_back(std::move(field));
    field.clear();
    was_quoted = false;
  };
  auto end_row = [&] {
    end_field();
    rows.push_back(std::move(row));
    row.clear();
    any = false;
  };
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
    any = true;
    if (c == '"') {
      if (!field.empty() || was_quoted) fail(Errc::kInvalidArgument, "stray quote inside a CSV field");
      quoted = was_quoted = true;
    } else if (c == ',') {
      end_field();
    } else if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') {
      ++i;
      end_row();
    } else if (c == '\n') {
      end_row();
    } else {
      if (was_quoted) fail(Errc::kInvalidArgument, "text after a closing quote in a CSV field");
      field.push_back(c);
    }
  }
  if (quoted) fail(Errc::kInvalidArgument, "unterminated quoted CSV field");
  if (any || !row.empty() || !field.empty()) end_row();
  return rows;
}

}  // namespace vocalmark::csv
