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

#include "reident/calibrate.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "reident/attack_sim.h"
#include "reident/risk_analytic.h"
#include "reident/risk_recursive.h"
#include "reident/rng.h"
#include "reident/scenario.h"

namespace reident {
namespace {

// Largest multiple of k not exceeding population; the homogeneous model is
// evaluated there when k does not divide the population.
int64_t DivisiblePopulation(int64_t population, int64_t k) {
  return (population / k) * k;
}

double HomogeneousRisk(const CalibrationRequest& request, int64_t k,
                       int64_t* population_used) {
  const int64_t d_used = DivisiblePopulation(request.population, k);
  const int64_t l_used = std::min(request.leak_size, d_used);
  *population_used = d_used;
  if (request.solver == CalibrationRequest::Solver::kAnalytic) {
    // The overlap sum, not the complement form: near the 1/D floor the
    // complement form loses enough precision to push the risk just above an
    // exactly attainable threshold.
    return SingleRisk(AttackScenario::Uniform(d_used, l_used, k),
                      request.backend)
        .value();
  }
  RecursionState state{ClassSizeDistribution::Homogeneous(d_used, k), l_used,
                       std::min(request.targets, l_used)};
  return MultiPatientRisk(state, request.backend).value();
}

}  // namespace

CalibrationResult CalibrateK(const CalibrationRequest& request) {
  const int64_t population = request.population;
  if (population < 1) {
    throw DomainError("population must be >= 1, got " +
                      std::to_string(population));
  }
  if (request.leak_size < 1 || request.leak_size > population) {
    throw DomainError("leak size " + std::to_string(request.leak_size) +
                      " outside [1, population=" + std::to_string(population) +
                      "]");
  }
  if (!(request.threshold > 0.0) || request.threshold > 1.0) {
    throw DomainError("threshold must lie in (0, 1]");
  }
  if (request.solver == CalibrationRequest::Solver::kRecursive &&
      (request.targets < 1 || request.targets > request.leak_size)) {
    throw DomainError("targets must lie in [1, leak size]");
  }

  CalibrationResult result;
  int64_t best_k = 0;
  double best_probability = std::numeric_limits<double>::infinity();
  for (int64_t k = 1; k <= population; ++k) {
    int64_t population_used = 0;
    const double probability = HomogeneousRisk(request, k, &population_used);
    result.scan.push_back(
        {k, probability, population_used, population_used != population});
    if (probability < best_probability) {
      best_probability = probability;
      best_k = k;
    }
    if (probability <= request.threshold) {
      result.k_min = k;
      result.probability = probability;
      return result;
    }
  }
  throw ThresholdUnreachableError(
      "no class size k in [1, " + std::to_string(population) +
          "] meets threshold " + std::to_string(request.threshold) +
          "; best is k = " + std::to_string(best_k) + " at probability " +
          std::to_string(best_probability),
      best_k, best_probability);
}

namespace {

void CheckPopulationAtLeast(const FigureRequest& request, int64_t minimum) {
  if (request.population < minimum) {
    throw DomainError("figure " + request.figure_id +
                      " needs a population of at least " +
                      std::to_string(minimum));
  }
}

// Leak sizes D/10 .. 2D/5 in steps of D/20, deduplicated for tiny D.
std::vector<int64_t> LowLeakGrid(int64_t population) {
  std::vector<int64_t> leaks;
  for (int64_t j = 2; j <= 8; ++j) {
    const int64_t leak = std::max<int64_t>(1, population * j / 20);
    if (leaks.empty() || leaks.back() != leak) {
      leaks.push_back(leak);
    }
  }
  return leaks;
}

struct SeriesBuilder {
  const FigureRequest* request;
  std::vector<FigureRow> rows;
  uint64_t next_stream = 0;

  void Analytic(const std::string& series, double x, int64_t population,
                int64_t leak, int64_t k) {
    const double y =
        SingleRisk(AttackScenario::Uniform(population, leak, k),
                   request->backend)
            .value();
    rows.push_back({series, x, y, {}, {}, {}});
  }

  void Simulated(const std::string& series, double x, int64_t population,
                 int64_t leak, int64_t k) {
    SimOptions options = TakeSimOptions();
    const RiskEstimate estimate =
        SimulateSingle(AttackScenario::Uniform(population, leak, k), options);
    rows.push_back({series, x, estimate.mean, estimate.ci95_low,
                    estimate.ci95_high, estimate.trials});
  }

  void SimulatedMulti(const std::string& series, double x, int64_t population,
                      int64_t leak, int64_t k, int64_t targets) {
    SimOptions options = TakeSimOptions();
    const RiskEstimate estimate = SimulateMulti(
        AttackScenario::Uniform(population, leak, k), targets, options);
    rows.push_back({series, x, estimate.mean, estimate.ci95_low,
                    estimate.ci95_high, estimate.trials});
  }

  void Recursive(const std::string& series, double x,
                 const ClassSizeDistribution& classes, int64_t leak,
                 int64_t targets) {
    const double y =
        MultiPatientRisk({classes, leak, targets}, request->backend).value();
    rows.push_back({series, x, y, {}, {}, {}});
  }

  void Histogram(const std::string& series, int64_t population, int64_t leak,
                 int64_t k) {
    SimOptions options = TakeSimOptions();
    options.histogram = true;
    const RiskEstimate estimate =
        SimulateSingle(AttackScenario::Uniform(population, leak, k), options);
    for (const HistogramBin& bin : estimate.histogram) {
      if (bin.risk_low != bin.risk_high) {
        continue;  // residual bin, structurally empty
      }
      rows.push_back({series, bin.risk_low, bin.frequency, {}, {},
                      estimate.trials});
    }
  }

 private:
  // Independent substream per simulated grid point, in a fixed visit order
  // so reruns cannot change the draws.
  SimOptions TakeSimOptions() {
    SimOptions options;
    options.trials = request->trials;
    options.seed = StreamSeed(request->seed, next_stream++);
    options.threads = request->threads;
    return options;
  }
};

constexpr int64_t kSingleTargetClassSizes[] = {1, 2, 5, 10, 15, 20};
constexpr int64_t kMultiTargetClassSizes[] = {5, 10, 15, 20};
constexpr int64_t kHistogramClassSizes[] = {1, 10, 20};

std::string WithParam(const std::string& prefix, int64_t value) {
  return prefix + "=" + std::to_string(value);
}

}  // namespace

std::vector<FigureRow> FigureData(const FigureRequest& request) {
  if (request.trials < 1) {
    throw DomainError("trials must be >= 1");
  }
  const int64_t population = request.population;
  SeriesBuilder builder{&request, {}, 0};

  if (request.figure_id == "fig2") {
    CheckPopulationAtLeast(request, 20);
    const std::vector<int64_t> leaks = LowLeakGrid(population);
    for (int64_t k : kSingleTargetClassSizes) {
      if (k > population) {
        continue;
      }
      const int64_t d_used = DivisiblePopulation(population, k);
      for (int64_t leak : leaks) {
        builder.Analytic(WithParam("analytic_k", k),
                         static_cast<double>(leak), d_used,
                         std::min(leak, d_used), k);
      }
    }
    for (int64_t k : kSingleTargetClassSizes) {
      if (k > population) {
        continue;
      }
      const int64_t d_used = DivisiblePopulation(population, k);
      for (int64_t leak : leaks) {
        builder.Simulated(WithParam("simulated_k", k),
                          static_cast<double>(leak), d_used,
                          std::min(leak, d_used), k);
      }
    }
    return builder.rows;
  }

  if (request.figure_id == "fig3a") {
    CheckPopulationAtLeast(request, 20);
    const int64_t leak = population * 2 / 5;
    for (int64_t k : kSingleTargetClassSizes) {
      if (k > population) {
        continue;
      }
      const int64_t d_used = DivisiblePopulation(population, k);
      builder.Analytic("analytic", static_cast<double>(k), d_used,
                       std::min(leak, d_used), k);
    }
    for (int64_t k : kSingleTargetClassSizes) {
      if (k > population) {
        continue;
      }
      const int64_t d_used = DivisiblePopulation(population, k);
      builder.Simulated("simulated", static_cast<double>(k), d_used,
                        std::min(leak, d_used), k);
    }
    for (int64_t k : kHistogramClassSizes) {
      if (k > population) {
        continue;
      }
      const int64_t d_used = DivisiblePopulation(population, k);
      builder.Histogram(WithParam("hist_k", k), d_used,
                        std::min(leak, d_used), k);
    }
    return builder.rows;
  }

  if (request.figure_id == "fig3b") {
    CheckPopulationAtLeast(request, 20);
    const int64_t k = 5;
    const int64_t d_used = DivisiblePopulation(population, k);
    std::vector<int64_t> leaks;
    for (int64_t j = 2; j <= 8; j += 2) {
      leaks.push_back(
          std::min(std::max<int64_t>(1, population * j / 20), d_used));
    }
    for (int64_t leak : leaks) {
      builder.Analytic("analytic", static_cast<double>(leak), d_used, leak,
                       k);
    }
    for (int64_t leak : leaks) {
      builder.Simulated("simulated", static_cast<double>(leak), d_used, leak,
                        k);
    }
    for (int64_t leak : leaks) {
      builder.Histogram(WithParam("hist_L", leak), d_used, leak, k);
    }
    return builder.rows;
  }

  if (request.figure_id == "fig4a") {
    const int64_t max_targets = 15;
    for (int64_t k : kMultiTargetClassSizes) {
      if (k > population) {
        continue;
      }
      const int64_t d_used = DivisiblePopulation(population, k);
      const ClassSizeDistribution classes =
          ClassSizeDistribution::Homogeneous(d_used, k);
      for (int64_t n = 1; n <= std::min(max_targets, d_used); ++n) {
        builder.Recursive(WithParam("recursive_k", k),
                          static_cast<double>(n), classes, d_used, n);
      }
    }
    for (int64_t k : kMultiTargetClassSizes) {
      if (k > population) {
        continue;
      }
      const int64_t d_used = DivisiblePopulation(population, k);
      for (int64_t n = 1; n <= std::min(max_targets, d_used); ++n) {
        builder.SimulatedMulti(WithParam("simulated_k", k),
                               static_cast<double>(n), d_used, d_used, k, n);
      }
    }
    return builder.rows;
  }

  if (request.figure_id == "fig4b") {
    CheckPopulationAtLeast(request, 10);
    const int64_t k = 5;
    const int64_t d_used = DivisiblePopulation(population, k);
    const ClassSizeDistribution classes =
        ClassSizeDistribution::Homogeneous(d_used, k);
    for (int64_t targets : {int64_t{5}, int64_t{10}, int64_t{15}}) {
      for (int64_t j = 1; j <= 10; ++j) {
        const int64_t leak = std::min(
            std::max<int64_t>(1, population * j / 10), d_used);
        if (targets > leak) {
          continue;
        }
        builder.Recursive(WithParam("recursive_n", targets),
                          static_cast<double>(leak), classes, leak, targets);
      }
    }
    return builder.rows;
  }

  if (request.figure_id == "fig5") {
    CompareRequest compare;
    compare.population = population;
    compare.k_min = 5;
    compare.samples = 20;
    compare.max_targets = 15;
    compare.seed = request.seed;
    compare.backend = request.backend;
    const CompareResult result = CompareClassDistributions(compare);
    for (const CompareRow& row : result.rows) {
      builder.rows.push_back({row.series, static_cast<double>(row.targets),
                              row.probability, {}, {}, {}});
    }
    return builder.rows;
  }

  throw DomainError("unknown figure id '" + request.figure_id +
                    "' (expected fig2, fig3a, fig3b, fig4a, fig4b or fig5)");
}

namespace {

// One heterogeneous census: sizes drawn from a lower-truncated normal,
// accumulated until they sum exactly to the population.
ClassSizeDistribution SampleDistribution(int64_t population, int64_t k_min,
                                         double stddev, TrialRng& rng) {
  constexpr int kMaxAttempts = 10000;
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    std::vector<int64_t> counts;
    int64_t total = 0;
    bool failed = false;
    while (total < population) {
      double draw;
      do {
        draw = rng.Normal(static_cast<double>(k_min), stddev);
      } while (draw < static_cast<double>(k_min));
      int64_t size = std::llround(draw);
      const int64_t remaining = population - total;
      if (size > remaining) {
        if (remaining >= k_min) {
          size = remaining;  // trim the last class to fit
        } else {
          failed = true;  // no class may fall below k_min; start over
          break;
        }
      }
      if (counts.size() <= static_cast<size_t>(size)) {
        counts.resize(static_cast<size_t>(size) + 1, 0);
      }
      ++counts[static_cast<size_t>(size)];
      total += size;
    }
    if (!failed) {
      return ClassSizeDistribution(std::move(counts));
    }
  }
  throw DomainError("could not sample a class layout for population " +
                    std::to_string(population) + " with minimum class size " +
                    std::to_string(k_min));
}

}  // namespace

CompareResult CompareClassDistributions(const CompareRequest& request) {
  if (request.k_min < 1) {
    throw DomainError("k_min must be >= 1");
  }
  if (request.population < request.k_min) {
    throw DomainError("population " + std::to_string(request.population) +
                      " cannot host a class of at least " +
                      std::to_string(request.k_min));
  }
  if (request.samples < 1) {
    throw DomainError("samples must be >= 1");
  }
  // Evaluate everything on the largest k_min-divisible sub-population so the
  // homogeneous baseline and the sampled layouts share one total.
  const int64_t population =
      DivisiblePopulation(request.population, request.k_min);
  if (request.max_targets < 1 || request.max_targets > population) {
    throw DomainError("max targets must lie in [1, " +
                      std::to_string(population) + "]");
  }
  const double stddev = request.stddev < 0.0
                            ? static_cast<double>(request.k_min) / 2.0
                            : request.stddev;

  CompareResult result;
  std::vector<double> homogeneous(static_cast<size_t>(request.max_targets));
  {
    RecursiveSolver solver(request.backend);
    const ClassSizeDistribution classes =
        ClassSizeDistribution::Homogeneous(population, request.k_min);
    for (int64_t n = 1; n <= request.max_targets; ++n) {
      const double p =
          solver.Solve({classes, population, n}).value();
      homogeneous[static_cast<size_t>(n - 1)] = p;
      result.rows.push_back({"homogeneous", n, p});
    }
  }
  for (int64_t sample = 1; sample <= request.samples; ++sample) {
    TrialRng rng(request.seed, static_cast<uint64_t>(sample));
    const ClassSizeDistribution classes =
        SampleDistribution(population, request.k_min, stddev, rng);
    const std::string series = "sample_" + std::to_string(sample);
    RecursiveSolver solver(request.backend);
    for (int64_t n = 1; n <= request.max_targets; ++n) {
      const double p = solver.Solve({classes, population, n}).value();
      result.rows.push_back({series, n, p});
      const double bound = homogeneous[static_cast<size_t>(n - 1)];
      if (p > bound * (1.0 + 1e-12) + 1e-15) {
        result.violations.push_back(
            series + " exceeds the homogeneous bound at n = " +
            std::to_string(n) + ": " + std::to_string(p) + " > " +
            std::to_string(bound));
      }
    }
  }
  return result;
}

}  // namespace reident
