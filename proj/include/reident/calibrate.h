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
// Policy-facing layer: pick the smallest k meeting a risk threshold,
// regenerate the report figures, and compare class-size layouts.

#ifndef REIDENT_CALIBRATE_H_
#define REIDENT_CALIBRATE_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "reident/error.h"
#include "reident/probability.h"

namespace reident {

struct CalibrationRequest {
  int64_t population = 0;
  int64_t leak_size = 0;
  double threshold = 0.0;  // must lie in (0, 1]
  enum class Solver { kAnalytic, kRecursive } solver = Solver::kAnalytic;
  int64_t targets = 1;  // recursive solver only
  Backend backend = Backend::kAuto;
};

struct CalibrationRow {
  int64_t k = 0;
  double probability = 0.0;
  // When k does not divide the population the scan evaluates the largest
  // divisible sub-population k*floor(D/k) instead and flags it here.
  int64_t population_used = 0;
  bool relaxed = false;
};

struct CalibrationResult {
  int64_t k_min = 0;
  double probability = 0.0;  // at k_min
  std::vector<CalibrationRow> scan;
};

// Carries the closest-achievable point when no k in 1..D meets the
// threshold.
class ThresholdUnreachableError : public DomainError {
 public:
  ThresholdUnreachableError(const std::string& message, int64_t best_k,
                            double best_probability)
      : DomainError(message),
        best_k(best_k),
        best_probability(best_probability) {}
  int64_t best_k;
  double best_probability;
};

// Linear scan k = 1, 2, ... for the first k whose single-target risk (or
// n-target risk under the recursive solver) drops to the threshold.
CalibrationResult CalibrateK(const CalibrationRequest& request);

// One replot-ready point: series label, abscissa, value, and, for
// simulated series, the 95% interval and trial count.
struct FigureRow {
  std::string series;
  double x = 0.0;
  double y = 0.0;
  std::optional<double> ci_low;
  std::optional<double> ci_high;
  std::optional<int64_t> trials;
};

struct FigureRequest {
  std::string figure_id;  // fig2, fig3a, fig3b, fig4a, fig4b, fig5
  int64_t population = 10000;
  int64_t trials = 1000;
  uint64_t seed = 0;
  int threads = 1;
  Backend backend = Backend::kAuto;
};

// Data behind each report chart, in long format:
//   fig2   analytic vs simulated single-target risk as the leak grows
//   fig3a  simulated risk and per-patient risk histograms across k
//   fig3b  the same across leak sizes at fixed k
//   fig4a  recursive vs simulated risk for n joint targets (full leak)
//   fig4b  recursive n-target risk as the leak grows
//   fig5   homogeneous vs sampled heterogeneous class layouts
// Unknown figure ids raise DomainError.
std::vector<FigureRow> FigureData(const FigureRequest& request);

struct CompareRequest {
  int64_t population = 0;
  int64_t k_min = 0;
  int64_t samples = 20;
  int64_t max_targets = 15;
  // Class sizes are drawn from a normal with mean k_min truncated below at
  // k_min, rounded; negative means "use k_min / 2".
  double stddev = -1.0;
  uint64_t seed = 0;
  Backend backend = Backend::kAuto;
};

struct CompareRow {
  std::string series;  // "homogeneous" or "sample_<i>"
  int64_t targets = 0;
  double probability = 0.0;
};

struct CompareResult {
  std::vector<CompareRow> rows;
  // Points where a heterogeneous layout beat the homogeneous one; expected
  // empty, reported rather than hidden when not.
  std::vector<std::string> violations;
};

// Evaluates the n-target risk at full leak (L = D) for the homogeneous
// layout at k_min and for `samples` randomly drawn layouts whose classes
// are all at least k_min.
CompareResult CompareClassDistributions(const CompareRequest& request);

}  // namespace reident

#endif  // REIDENT_CALIBRATE_H_
