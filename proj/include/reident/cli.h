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

#ifndef REIDENT_CLI_H_
#define REIDENT_CLI_H_

#include <iosfwd>
#include <string>
#include <vector>

namespace reident {

// Runs one CLI invocation (args exclude the program name) and returns the
// process exit code: 0 success, 1 I/O or parse failure, 2 domain or usage
// violation. Results are printed to `out` as a JSON envelope
// {params, seed, backend, result, timing}; errors go to `err`. Identical
// invocations produce byte-identical output except for the timing field.
int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err);

}  // namespace reident

#endif  // REIDENT_CLI_H_
