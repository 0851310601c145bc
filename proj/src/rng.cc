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

#include "reident/rng.h"

#include <cmath>

#include "reident/error.h"

namespace reident {

uint64_t StreamSeed(uint64_t master_seed, uint64_t stream) {
  // SplitMix64 advances its state by the golden-ratio increment each step,
  // so the state before output number (stream+1) is available in closed
  // form; applying the output mix yields that element directly.
  uint64_t z = master_seed + (stream + 1) * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

int64_t TrialRng::UniformBelow(int64_t bound) {
  if (bound < 1) {
    throw DomainError("UniformBelow: bound must be >= 1");
  }
  const uint64_t b = static_cast<uint64_t>(bound);
  // Reject the sliver below 2^64 mod b so every residue is equally likely.
  const uint64_t threshold = (-b) % b;
  for (;;) {
    const uint64_t r = Next();
    if (r >= threshold) {
      return static_cast<int64_t>(r % b);
    }
  }
}

double TrialRng::UnitOpen() {
  // 53 high bits, centered in the cell: uniform on (0, 1), never an endpoint.
  return (static_cast<double>(Next() >> 11) + 0.5) * 0x1.0p-53;
}

double TrialRng::Normal(double mean, double stddev) {
  if (has_spare_) {
    has_spare_ = false;
    return mean + stddev * spare_;
  }
  const double u1 = UnitOpen();
  const double u2 = UnitOpen();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * M_PI * u2;
  spare_ = radius * std::sin(angle);
  has_spare_ = true;
  return mean + stddev * radius * std::cos(angle);
}

}  // namespace reident
