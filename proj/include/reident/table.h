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

#ifndef REIDENT_TABLE_H_
#define REIDENT_TABLE_H_

#include <string>
#include <vector>

namespace reident {

struct DelimitedTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

// Parses delimiter-separated text with a header row. Fields may be quoted
// with double quotes; "" inside a quoted field is a literal quote. Rows
// whose field count differs from the header raise ParseError with the
// 1-based row number; so does empty input.
DelimitedTable ReadDelimited(const std::string& text, char delimiter = ',');

// Serializes with minimal quoting (only fields containing the delimiter,
// quotes, or newlines are quoted). Lines end with '\n'.
std::string WriteDelimited(const DelimitedTable& table, char delimiter = ',');

}  // namespace reident

#endif  // REIDENT_TABLE_H_
