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

#ifndef REIDENT_PROBABILITY_H_
#define REIDENT_PROBABILITY_H_

#include <gmpxx.h>

#include <cstdint>
#include <string>

namespace reident {

// Numeric backend for the solvers. kExact carries arbitrary-precision
// rationals end to end; kLog works in double precision with log-domain
// combinatorics where magnitudes demand it. kAuto picks kExact for small
// populations (cheap and bit-for-bit checkable) and kLog beyond.
enum class Backend { kAuto, kExact, kLog };

// Largest population the auto rule still serves with exact rationals.
inline constexpr int64_t kExactAutoMaxPopulation = 64;

Backend ResolveBackend(Backend requested, int64_t population);

// CLI spelling ("auto" / "exact" / "log") of a backend tag.
const char* BackendName(Backend backend);

// A probability in [0, 1], tagged with the backend that produced it.
class Probability {
 public:
  // Zero probability on the double backend.
  Probability() = default;

  // Throws DomainError outside [0, 1]. Exact values are canonicalized.
  static Probability Exact(mpq_class value);

  // Throws DomainError outside [0, 1]; accumulated float error within
  // a few parts in 1e9 of the boundary is clamped onto it.
  static Probability Real(double value);

  Backend backend() const { return backend_; }
  bool is_exact() const { return backend_ == Backend::kExact; }

  // Double view. Exact values convert monotonically, within one ulp.
  double value() const;

  // Natural log of the value; -inf for zero.
  double log_value() const;

  // Rational view, e.g. "5/12". Only valid on the exact backend.
  const mpq_class& exact_value() const;
  std::string RatioString() const;

 private:
  Backend backend_ = Backend::kLog;
  double real_ = 0.0;
  mpq_class exact_;
};

}  // namespace reident

#endif  // REIDENT_PROBABILITY_H_
