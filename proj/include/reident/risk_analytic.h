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
// Closed-form re-identification risk for a single target drawn uniformly
// from a k-anonymous population after a leak of L whole histories.

#ifndef REIDENT_RISK_ANALYTIC_H_
#define REIDENT_RISK_ANALYTIC_H_

#include <cstdint>
#include <span>
#include <vector>

#include "reident/probability.h"
#include "reident/scenario.h"

namespace reident {

// P(random patient is re-identified) for uniform classes of size k:
//
//   (1/k) * sum_{h=1..k} C(k,h) C(D-k,L-h) / C(D,L)
//
// where a target leaked alongside h-1 classmates is picked with odds 1/h.
// Endpoints collapse exactly: L=D -> 1/k, L=1 -> 1/D, k=1 -> L/D.
// Requires a homogeneous scenario (class size dividing the population).
Probability SingleRisk(const AttackScenario& scenario,
                       Backend backend = Backend::kAuto);

// The same probability through the complement:
//
//   (1/k) * (1 - C(D-k,L) / C(D,L))
//
// with the binomial ratio evaluated as a product of k factor ratios, so no
// large intermediate ever materializes on the double backend.
Probability SingleRiskClosed(const AttackScenario& scenario,
                             Backend backend = Backend::kAuto);

struct SweepPoint {
  int64_t class_size = 0;
  int64_t leak_size = 0;
  Probability probability;
};

// SingleRisk over the cross product of class sizes and leak sizes, ordered
// by class size then leak size. A domain error at any grid point is
// rethrown with the offending coordinates prefixed.
std::vector<SweepPoint> RiskSweep(int64_t population,
                                  std::span<const int64_t> class_sizes,
                                  std::span<const int64_t> leak_sizes,
                                  Backend backend = Backend::kAuto);

}  // namespace reident

#endif  // REIDENT_RISK_ANALYTIC_H_
