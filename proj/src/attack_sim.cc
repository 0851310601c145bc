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

#include "reident/attack_sim.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "reident/combinatorics.h"
#include "reident/error.h"

namespace reident {
namespace {

constexpr double kZ95 = 1.96;

// Target draws switch from rejection sampling to a partial shuffle once the
// target set is a sizable share of the population.
constexpr int64_t kRejectionMaxTargets = 64;

// Scratch reused across the trials of one worker.
struct Workspace {
  std::vector<int64_t> perm;     // partial Fisher-Yates buffer
  std::vector<int64_t> counts;   // leaked members per class
  std::vector<int32_t> touched;  // classes with counts > 0
  std::vector<uint8_t> leaked;   // per-patient leak membership (multi only)
  std::vector<int64_t> targets;  // chosen targets (multi only)

  explicit Workspace(int64_t population, size_t classes, bool multi)
      : perm(static_cast<size_t>(population)),
        counts(classes, 0),
        leaked(multi ? static_cast<size_t>(population) : 0, 0) {}
};

// Draws the leak for one trial: perm[0..L) become the leaked patients and
// counts/touched reflect the per-class leak membership.
void DrawLeak(const ClassIndex& index, int64_t population, int64_t leak_size,
              TrialRng& rng, Workspace& ws) {
  std::iota(ws.perm.begin(), ws.perm.end(), int64_t{0});
  for (int64_t i = 0; i < leak_size; ++i) {
    const int64_t j = i + rng.UniformBelow(population - i);
    std::swap(ws.perm[i], ws.perm[j]);
  }
  ws.touched.clear();
  for (int64_t i = 0; i < leak_size; ++i) {
    const int32_t c = index.class_of[static_cast<size_t>(ws.perm[i])];
    if (ws.counts[static_cast<size_t>(c)]++ == 0) {
      ws.touched.push_back(c);
    }
  }
}

void ResetCounts(Workspace& ws) {
  for (int32_t c : ws.touched) {
    ws.counts[static_cast<size_t>(c)] = 0;
  }
}

// All-patient average risk for the drawn leak. Leaked patients in a class
// contribute count * (1/count), so the average is (classes hit) / D.
double SingleTrialMean(const Workspace& ws, int64_t population) {
  return static_cast<double>(ws.touched.size()) /
         static_cast<double>(population);
}

void AccumulateHistogram(const Workspace& ws, int64_t population,
                         int64_t leak_size, std::vector<int64_t>& bins) {
  bins[0] += population - leak_size;  // risk 0
  for (int32_t c : ws.touched) {
    const int64_t count = ws.counts[static_cast<size_t>(c)];
    bins[static_cast<size_t>(count)] += count;  // `count` patients at 1/count
  }
}

double RiskOfAndRemove(const ClassIndex& index, int64_t patient,
                       Workspace& ws);

// Product of successive risks for `targets` distinct uniform patients.
double MultiTrialProduct(const ClassIndex& index, int64_t population,
                         int64_t leak_size, int64_t targets, TrialRng& rng,
                         Workspace& ws) {
  for (int64_t i = 0; i < leak_size; ++i) {
    ws.leaked[static_cast<size_t>(ws.perm[i])] = 1;
  }
  ws.targets.clear();
  double product = 1.0;
  if (targets <= kRejectionMaxTargets) {
    for (int64_t m = 0; m < targets && product != 0.0; ++m) {
      int64_t x;
      for (;;) {
        x = rng.UniformBelow(population);
        if (std::find(ws.targets.begin(), ws.targets.end(), x) ==
            ws.targets.end()) {
          break;
        }
      }
      ws.targets.push_back(x);
      product *= RiskOfAndRemove(index, x, ws);
    }
  } else {
    // Partial shuffle over a fresh identity to pick distinct targets.
    std::vector<int64_t> pool(static_cast<size_t>(population));
    std::iota(pool.begin(), pool.end(), int64_t{0});
    for (int64_t m = 0; m < targets && product != 0.0; ++m) {
      const int64_t j = m + rng.UniformBelow(population - m);
      std::swap(pool[static_cast<size_t>(m)], pool[static_cast<size_t>(j)]);
      product *= RiskOfAndRemove(index, pool[static_cast<size_t>(m)], ws);
    }
  }
  for (int64_t i = 0; i < leak_size; ++i) {
    ws.leaked[static_cast<size_t>(ws.perm[i])] = 0;
  }
  return product;
}

double RiskOfAndRemove(const ClassIndex& index, int64_t patient,
                       Workspace& ws) {
  if (!ws.leaked[static_cast<size_t>(patient)]) {
    return 0.0;
  }
  const int32_t c = index.class_of[static_cast<size_t>(patient)];
  const int64_t count = ws.counts[static_cast<size_t>(c)];
  // Identified: remove from the leak so classmates get easier to single out.
  ws.counts[static_cast<size_t>(c)] = count - 1;
  ws.leaked[static_cast<size_t>(patient)] = 0;
  return 1.0 / static_cast<double>(count);
}

struct TrialPlan {
  const AttackScenario* scenario;
  const ClassIndex* index;
  int64_t targets = 0;  // 0 = single-target mode
  bool histogram = false;
};

// Runs trials [first, last) into means[first..last) and local bins.
void RunBlock(const TrialPlan& plan, const SimOptions& options, int64_t first,
              int64_t last, std::vector<double>& means,
              std::vector<int64_t>& bins) {
  const int64_t population = plan.scenario->population();
  const int64_t leak_size = plan.scenario->leak_size();
  Workspace ws(population, plan.index->class_size.size(), plan.targets > 0);
  for (int64_t t = first; t < last; ++t) {
    TrialRng rng(options.seed, static_cast<uint64_t>(t));
    DrawLeak(*plan.index, population, leak_size, rng, ws);
    if (plan.targets > 0) {
      means[static_cast<size_t>(t)] = MultiTrialProduct(
          *plan.index, population, leak_size, plan.targets, rng, ws);
    } else {
      means[static_cast<size_t>(t)] = SingleTrialMean(ws, population);
      if (plan.histogram) {
        AccumulateHistogram(ws, population, leak_size, bins);
      }
    }
    ResetCounts(ws);
  }
}

RiskEstimate Aggregate(const TrialPlan& plan, const SimOptions& options,
                       const std::vector<double>& means,
                       const std::vector<int64_t>& bins) {
  const int64_t trials = options.trials;
  CompensatedSum sum;
  for (double m : means) {
    sum.Add(m);
  }
  const double mean = sum.Total() / static_cast<double>(trials);
  double se = 0.0;
  if (trials > 1) {
    CompensatedSum sq;
    for (double m : means) {
      const double d = m - mean;
      sq.Add(d * d);
    }
    se = std::sqrt(sq.Total() / static_cast<double>(trials - 1) /
                   static_cast<double>(trials));
  }

  RiskEstimate estimate;
  estimate.mean = mean;
  estimate.standard_error = se;
  estimate.trials = trials;
  estimate.seed = options.seed;

  if (options.ci == SimOptions::Ci::kBootstrap && trials > 1) {
    // Percentile bootstrap over trial means; resample streams continue the
    // trial numbering so they never collide with trial streams.
    const int64_t resamples = options.bootstrap_resamples;
    std::vector<double> boot(static_cast<size_t>(resamples));
    for (int64_t b = 0; b < resamples; ++b) {
      TrialRng rng(options.seed, static_cast<uint64_t>(trials + b));
      CompensatedSum rs;
      for (int64_t i = 0; i < trials; ++i) {
        rs.Add(means[static_cast<size_t>(rng.UniformBelow(trials))]);
      }
      boot[static_cast<size_t>(b)] = rs.Total() / static_cast<double>(trials);
    }
    std::sort(boot.begin(), boot.end());
    const auto rank = [&](double q) {
      return boot[static_cast<size_t>(
          std::llround(q * static_cast<double>(resamples - 1)))];
    };
    estimate.ci95_low = rank(0.025);
    estimate.ci95_high = rank(0.975);
  } else {
    estimate.ci95_low = mean - kZ95 * se;
    estimate.ci95_high = mean + kZ95 * se;
  }

  if (plan.histogram) {
    const double total =
        static_cast<double>(trials) *
        static_cast<double>(plan.scenario->population());
    // Ascending risk: 0, then 1/max, ..., 1/1, then the residual bin.
    estimate.histogram.push_back(
        {0.0, 0.0, bins[0], static_cast<double>(bins[0]) / total});
    for (size_t m = bins.size() - 1; m >= 1; --m) {
      const double risk = 1.0 / static_cast<double>(m);
      estimate.histogram.push_back(
          {risk, risk, bins[m], static_cast<double>(bins[m]) / total});
    }
    estimate.histogram.push_back({0.0, 1.0, 0, 0.0});  // residual
  }
  return estimate;
}

RiskEstimate Run(const TrialPlan& plan, const SimOptions& options) {
  if (options.trials < 1) {
    throw DomainError("simulation needs at least one trial");
  }
  const int64_t trials = options.trials;
  const int workers = std::max(
      1, std::min<int>(options.threads, static_cast<int>(
                                            std::min<int64_t>(trials, 1024))));
  std::vector<double> means(static_cast<size_t>(trials), 0.0);
  const size_t bin_count =
      static_cast<size_t>(plan.index->max_class_size) + 1;
  std::vector<std::vector<int64_t>> block_bins(
      static_cast<size_t>(workers), std::vector<int64_t>(bin_count, 0));

  if (workers == 1) {
    RunBlock(plan, options, 0, trials, means, block_bins[0]);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(workers));
    for (int w = 0; w < workers; ++w) {
      const int64_t first = trials * w / workers;
      const int64_t last = trials * (w + 1) / workers;
      pool.emplace_back([&, w, first, last] {
        RunBlock(plan, options, first, last, means,
                 block_bins[static_cast<size_t>(w)]);
      });
    }
    for (auto& th : pool) {
      th.join();
    }
  }

  // Integer bin merges commute exactly, so worker count cannot change them.
  std::vector<int64_t> bins(bin_count, 0);
  for (const auto& local : block_bins) {
    for (size_t i = 0; i < bin_count; ++i) {
      bins[i] += local[i];
    }
  }
  return Aggregate(plan, options, means, bins);
}

}  // namespace

ClassIndex BuildClassIndex(const AttackScenario& scenario) {
  ClassIndex index;
  index.class_of.resize(static_cast<size_t>(scenario.population()));
  const auto& counts = scenario.classes().counts();
  int32_t next_class = 0;
  size_t next_patient = 0;
  for (size_t size = 1; size < counts.size(); ++size) {
    for (int64_t c = 0; c < counts[size]; ++c) {
      index.class_size.push_back(static_cast<int64_t>(size));
      for (size_t m = 0; m < size; ++m) {
        index.class_of[next_patient++] = next_class;
      }
      ++next_class;
    }
    if (counts[size] > 0) {
      index.max_class_size = static_cast<int64_t>(size);
    }
  }
  return index;
}

LeakSample SampleLeak(const AttackScenario& scenario, TrialRng& rng) {
  const ClassIndex index = BuildClassIndex(scenario);
  Workspace ws(scenario.population(), index.class_size.size(), false);
  DrawLeak(index, scenario.population(), scenario.leak_size(), rng, ws);
  LeakSample sample;
  sample.leaked_patients.assign(
      ws.perm.begin(), ws.perm.begin() + scenario.leak_size());
  sample.class_of = index.class_of;
  sample.class_leak_counts = ws.counts;
  return sample;
}

std::vector<double> AssignRisks(const LeakSample& sample) {
  std::vector<double> risks(sample.class_of.size(), 0.0);
  for (int64_t patient : sample.leaked_patients) {
    const int32_t c = sample.class_of[static_cast<size_t>(patient)];
    risks[static_cast<size_t>(patient)] =
        1.0 / static_cast<double>(sample.class_leak_counts[
                  static_cast<size_t>(c)]);
  }
  return risks;
}

RiskEstimate SimulateSingle(const AttackScenario& scenario,
                            const SimOptions& options) {
  const ClassIndex index = BuildClassIndex(scenario);
  TrialPlan plan{&scenario, &index, 0, options.histogram};
  return Run(plan, options);
}

RiskEstimate SimulateMulti(const AttackScenario& scenario, int64_t targets,
                           const SimOptions& options) {
  if (targets < 1 || targets > scenario.population()) {
    throw DomainError("target count " + std::to_string(targets) +
                      " outside [1, population=" +
                      std::to_string(scenario.population()) + "]");
  }
  if (options.histogram) {
    throw DomainError(
        "per-patient histograms only apply to single-target simulation");
  }
  const ClassIndex index = BuildClassIndex(scenario);
  TrialPlan plan{&scenario, &index, targets, false};
  return Run(plan, options);
}

}  // namespace reident
