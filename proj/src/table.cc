// Copyright 2026 The reident Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "reident/table.h"

#include <cstddef>
#include <string>
#include <vector>

#include "reident/error.h"

namespace reident {
namespace {

// Splits one logical line; `pos` sits on the first character of the line and
// ends past its terminator. Handles quoted fields with doubled quotes.
std::vector<std::string> SplitLine(const std::string& text, size_t& pos,
                                   char delimiter, int64_t line_number) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  for (;;) {
    if (pos >= text.size()) {
      if (quoted) {
        throw ParseError("line " + std::to_string(line_number) +
                         ": unterminated quoted field");
      }
      break;
    }
    const char c = text[pos];
    if (quoted) {
      if (c == '"') {
        if (pos + 1 < text.size() && text[pos + 1] == '"') {
          field.push_back('"');
          pos += 2;
        } else {
          quoted = false;
          ++pos;
        }
      } else {
        field.push_back(c);
        ++pos;
      }
      continue;
    }
    if (c == '"' && field.empty()) {
      quoted = true;
      ++pos;
    } else if (c == delimiter) {
      fields.push_back(std::move(field));
      field.clear();
      ++pos;
    } else if (c == '\n') {
      ++pos;
      break;
    } else if (c == '\r') {
      ++pos;
      if (pos < text.size() && text[pos] == '\n') {
        ++pos;
      }
      break;
    } else {
      field.push_back(c);
      ++pos;
    }
  }
  fields.push_back(std::move(field));
  return fields;
}

bool NeedsQuoting(const std::string& field, char delimiter) {
  for (char c : field) {
    if (c == delimiter || c == '"' || c == '\n' || c == '\r') {
      return true;
    }
  }
  return false;
}

void AppendField(std::string& out, const std::string& field, char delimiter) {
  if (!NeedsQuoting(field, delimiter)) {
    out += field;
    return;
  }
  out.push_back('"');
  for (char c : field) {
    if (c == '"') {
      out.push_back('"');
    }
    out.push_back(c);
  }
  out.push_back('"');
}

}  // namespace

DelimitedTable ReadDelimited(const std::string& text, char delimiter) {
  DelimitedTable table;
  size_t pos = 0;
  int64_t line_number = 0;
  while (pos < text.size()) {
    ++line_number;
    // Skip blank lines (common at end of file).
    if (text[pos] == '\n') {
      ++pos;
      continue;
    }
    if (text[pos] == '\r' &&
        (pos + 1 >= text.size() || text[pos + 1] == '\n')) {
      pos += (pos + 1 < text.size()) ? 2 : 1;
      continue;
    }
    std::vector<std::string> fields =
        SplitLine(text, pos, delimiter, line_number);
    if (table.header.empty()) {
      table.header = std::move(fields);
    } else {
      if (fields.size() != table.header.size()) {
        throw ParseError("line " + std::to_string(line_number) + ": expected " +
                         std::to_string(table.header.size()) +
                         " fields, found " + std::to_string(fields.size()));
      }
      table.rows.push_back(std::move(fields));
    }
  }
  if (table.header.empty()) {
    throw ParseError("empty input: no header row");
  }
  return table;
}

std::string WriteDelimited(const DelimitedTable& table, char delimiter) {
  std::string out;
  const auto append_row = [&](const std::vector<std::string>& row) {
    for (size_t i = 0; i < row.size(); ++i) {
      if (i > 0) {
        out.push_back(delimiter);
      }
      AppendField(out, row[i], delimiter);
    }
    out.push_back('\n');
  };
  append_row(table.header);
  for (const auto& row : table.rows) {
    append_row(row);
  }
  return out;
}

}  // namespace reident
