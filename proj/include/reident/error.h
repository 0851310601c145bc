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

#ifndef REIDENT_ERROR_H_
#define REIDENT_ERROR_H_

#include <stdexcept>
#include <string>

namespace reident {

// An operation was asked to run outside its documented domain (k = 0,
// leak larger than the population, a threshold no class size can meet, ...).
// The CLI maps this to exit code 2.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Input bytes could not be decoded: unreadable files, malformed delimited
// rows, schema JSON that does not describe the data. Maps to exit code 1.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace reident

#endif  // REIDENT_ERROR_H_
