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
// Probability that n distinct targets are all re-identified, computed by
// recursion over "identify one patient, shrink the class census" steps.

#ifndef REIDENT_RISK_RECURSIVE_H_
#define REIDENT_RISK_RECURSIVE_H_

#include <cstdint>
#include <memory>
#include <vector>

#include "reident/probability.h"
#include "reident/scenario.h"

namespace reident {

// (class census, leak size, number of targets still to identify). The
// population is implied by the census.
struct RecursionState {
  ClassSizeDistribution classes;
  int64_t leak_size = 0;
  int64_t targets = 0;
};

// One cell of the first-target event triangle: the first target sits in a
// class of size class_size, was leaked, and overlap other classmates were
// leaked with it.
struct FirstPatientTerm {
  int64_t class_size = 0;
  int64_t overlap = 0;
  Probability probability;
};

// The full triangle (overlap = 0..class_size-1 for every class size with a
// nonzero count), zero-probability cells included. Each term is
//
//   1/(overlap+1) * L/D * P(overlap | leaked) * k a_k / D
//
// where the last factor is the patient-weighted chance that the target
// belongs to a size-k class, and the sum over the triangle equals the
// single-target risk.
std::vector<FirstPatientTerm> FirstPatientTerms(
    const RecursionState& state, Backend backend = Backend::kAuto);

// Census after one identified patient leaves a class of class_size:
// a_k -= 1, a_{k-1} += 1. Throws DomainError when no such class exists.
ClassSizeDistribution ApplyIdentification(const ClassSizeDistribution& classes,
                                          int64_t class_size);

// Memoized evaluator. One instance may serve many queries; cached values
// are keyed on (census, leak size, targets) so mixed workloads share work.
// Evaluation is pure, so results do not depend on query order.
class RecursiveSolver {
 public:
  explicit RecursiveSolver(Backend backend = Backend::kAuto,
                           bool memoize = true);
  ~RecursiveSolver();
  RecursiveSolver(RecursiveSolver&&) noexcept;
  RecursiveSolver& operator=(RecursiveSolver&&) noexcept;

  // P(all `targets` distinct uniformly-drawn patients re-identified).
  // targets = 0 yields 1; targets > leak_size is a DomainError.
  Probability Solve(const RecursionState& state);

  int64_t memo_entries() const;

 private:
  class Impl;
  std::unique_ptr<Impl> impl_;
};

// Single-shot convenience wrapper around RecursiveSolver.
Probability MultiPatientRisk(const RecursionState& state,
                             Backend backend = Backend::kAuto);

}  // namespace reident

#endif  // REIDENT_RISK_RECURSIVE_H_
