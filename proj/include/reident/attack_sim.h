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
// Monte Carlo attack simulation: draw uniform leaks, score every patient,
// aggregate means with uncertainty. Trial t always consumes the stream
// (master seed, t), so estimates are identical under any worker count.

#ifndef REIDENT_ATTACK_SIM_H_
#define REIDENT_ATTACK_SIM_H_

#include <cstdint>
#include <vector>

#include "reident/rng.h"
#include "reident/scenario.h"

namespace reident {

// Concrete patient layout for a scenario: patients 0..D-1 assigned to
// classes in ascending class-size order.
struct ClassIndex {
  std::vector<int32_t> class_of;    // patient -> class id
  std::vector<int64_t> class_size;  // class id -> total members
  int64_t max_class_size = 0;
};

ClassIndex BuildClassIndex(const AttackScenario& scenario);

// One sampled leak: who leaked, the patient->class map, and how many
// members each class lost to the leak.
struct LeakSample {
  std::vector<int64_t> leaked_patients;    // in draw order
  std::vector<int32_t> class_of;           // patient -> class id
  std::vector<int64_t> class_leak_counts;  // class id -> leaked members
};

// Uniform leak of scenario.leak_size() patients via partial Fisher-Yates,
// O(D) per draw.
LeakSample SampleLeak(const AttackScenario& scenario, TrialRng& rng);

// Per-patient re-identification risk under one leak: 0 for non-leaked
// patients, 1/(leaked members of own class) for leaked ones.
std::vector<double> AssignRisks(const LeakSample& sample);

struct HistogramBin {
  double risk_low = 0.0;   // point bins have risk_low == risk_high
  double risk_high = 0.0;
  int64_t count = 0;
  double frequency = 0.0;  // count / (trials * population)
};

struct RiskEstimate {
  double mean = 0.0;
  double standard_error = 0.0;
  double ci95_low = 0.0;
  double ci95_high = 0.0;
  int64_t trials = 0;
  uint64_t seed = 0;
  // Pooled per-patient risk histogram over bins {0} u {1/m}, plus one
  // trailing residual bin; only filled when requested.
  std::vector<HistogramBin> histogram;
};

struct SimOptions {
  int64_t trials = 1000;
  uint64_t seed = 0;
  int threads = 1;
  bool histogram = false;
  enum class Ci { kNormal, kBootstrap } ci = Ci::kNormal;
  int64_t bootstrap_resamples = 1000;
};

// Mean over trials of the all-patient average risk, i.e. an unbiased
// estimate of the single-target probability. The 95% interval is
// mean +/- 1.96 SE, or a percentile bootstrap when requested.
RiskEstimate SimulateSingle(const AttackScenario& scenario,
                            const SimOptions& options);

// Mean over trials of the product of successive risks for `targets`
// distinct patients drawn uniformly from the whole population, each
// identified target being removed from the leak before the next draw.
// Estimates P(all targets re-identified). Histograms do not apply here.
RiskEstimate SimulateMulti(const AttackScenario& scenario, int64_t targets,
                           const SimOptions& options);

}  // namespace reident

#endif  // REIDENT_ATTACK_SIM_H_
