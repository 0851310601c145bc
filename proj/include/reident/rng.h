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

#ifndef REIDENT_RNG_H_
#define REIDENT_RNG_H_

#include <cstdint>
#include <random>

namespace reident {

// Seed for stream number `stream` under `master_seed`: the (stream+1)-th
// output of a SplitMix64 sequence started at master_seed, computed in O(1)
// from the closed form of the SplitMix64 state walk. Streams derived this
// way are independent of how work is scheduled, which is what makes
// simulations reproducible under any worker count.
uint64_t StreamSeed(uint64_t master_seed, uint64_t stream);

// One random stream, addressed by (master_seed, stream). Every draw path is
// implemented here rather than with std::*_distribution so results are
// pinned by this code, not by a library's unspecified algorithm.
class TrialRng {
 public:
  TrialRng(uint64_t master_seed, uint64_t stream)
      : engine_(StreamSeed(master_seed, stream)) {}

  uint64_t Next() { return engine_(); }

  // Unbiased integer in [0, bound); bound >= 1.
  int64_t UniformBelow(int64_t bound);

  // Uniform in the open interval (0, 1); never 0, so safe under log.
  double UnitOpen();

  // Gaussian via Box-Muller; the spare variate is cached.
  double Normal(double mean, double stddev);

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace reident

#endif  // REIDENT_RNG_H_
