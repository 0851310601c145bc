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
//
// Independent reference implementations for the test suite. Everything here
// enumerates or uses high-precision arithmetic and is deliberately naive:
// correctness over speed, no code shared with the library under test beyond
// plain data types.

#ifndef REIDENT_TESTS_ORACLES_H_
#define REIDENT_TESTS_ORACLES_H_

#include <gmpxx.h>

#include <cstdint>

#include "reident/scenario.h"

namespace reident::testing {

// Expected all-patient average risk, enumerated over every size-L leak of a
// population of `population` patients in homogeneous classes of
// `class_size`. Requires population <= 20 (bitmask enumeration).
mpq_class BruteForceSingleRisk(int64_t population, int64_t class_size,
                               int64_t leak_size);

// P(an ordered tuple of `targets` distinct uniform patients is fully
// re-identified), enumerated over every leak and every tuple. Identified
// patients leave the leak before the next lookup. Requires
// population <= 12 and small target counts.
mpq_class ExhaustiveMultiRisk(const ClassSizeDistribution& classes,
                              int64_t leak_size, int64_t targets);

// P(exactly `hits` of the first `class_size` patients fall in a uniform
// size-`leak_size` subset), by subset enumeration. Requires
// population <= 20.
mpq_class HypergeomByEnumeration(int64_t class_size, int64_t population,
                                 int64_t leak_size, int64_t hits);

// ln C(n, r) through 256-bit lngamma, correctly rounded to double.
double MpfrLnBinomial(int64_t n, int64_t r);

}  // namespace reident::testing

#endif  // REIDENT_TESTS_ORACLES_H_
