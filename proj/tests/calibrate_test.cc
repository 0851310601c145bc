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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "reident/error.h"
#include "reident/risk_analytic.h"
#include "reident/scenario.h"

namespace reident {
namespace {

std::set<std::string> SeriesNames(const std::vector<FigureRow>& rows) {
  std::set<std::string> names;
  for (const FigureRow& row : rows) names.insert(row.series);
  return names;
}

std::vector<FigureRow> SeriesRows(const std::vector<FigureRow>& rows,
                                  const std::string& series) {
  std::vector<FigureRow> out;
  for (const FigureRow& row : rows) {
    if (row.series == series) out.push_back(row);
  }
  return out;
}

TEST(CalibrateK, FindsSmallestCompliantClassSize) {
  CalibrationRequest request;
  request.population = 10000;
  request.leak_size = 4000;
  request.threshold = 0.33;
  CalibrationResult result = CalibrateK(request);
  EXPECT_EQ(result.k_min, 2);
  EXPECT_NEAR(result.probability, 0.32001200120012, 1e-12);
  ASSERT_EQ(result.scan.size(), 2u);
  EXPECT_EQ(result.scan[0].k, 1);
  EXPECT_DOUBLE_EQ(result.scan[0].probability, 0.4);
  EXPECT_FALSE(result.scan[0].relaxed);
  EXPECT_EQ(result.scan[1].k, 2);

  request.threshold = 0.05;
  result = CalibrateK(request);
  EXPECT_EQ(result.k_min, 20);
  // The scan shows the threshold straddled between k - 1 and k.
  ASSERT_EQ(result.scan.size(), 20u);
  EXPECT_GT(result.scan[18].probability, 0.05);
  EXPECT_LE(result.scan[19].probability, 0.05);
}

TEST(CalibrateK, ScanStraddlesTheThreshold) {
  CalibrationRequest request;
  request.population = 600;
  request.leak_size = 240;
  request.threshold = 0.02;
  CalibrationResult result = CalibrateK(request);
  ASSERT_GE(result.k_min, 2);
  // Every k before k_min fails the threshold; k_min meets it.
  for (const CalibrationRow& row : result.scan) {
    if (row.k < result.k_min) {
      EXPECT_GT(row.probability, request.threshold) << "k=" << row.k;
    }
  }
  EXPECT_LE(result.probability, request.threshold);
  EXPECT_EQ(result.scan.back().k, result.k_min);
}

TEST(CalibrateK, TrivialThresholdStopsAtOne) {
  CalibrationRequest request;
  request.population = 100;
  request.leak_size = 1;
  request.threshold = 0.5;
  CalibrationResult result = CalibrateK(request);
  EXPECT_EQ(result.k_min, 1);
  EXPECT_DOUBLE_EQ(result.probability, 0.01);  // L=1 risk is 1/D everywhere
  EXPECT_EQ(result.scan.size(), 1u);
}

TEST(CalibrateK, FlagsNonDivisibleClassSizes) {
  // D = 10, L = 10: k = 3 evaluates on the 9-patient sub-population.
  CalibrationRequest request;
  request.population = 10;
  request.leak_size = 10;
  request.threshold = 0.30;
  CalibrationResult result = CalibrateK(request);
  EXPECT_EQ(result.k_min, 4);  // 1/3 > 0.30 at k = 3, 1/4 <= 0.30
  std::map<int64_t, CalibrationRow> by_k;
  for (const CalibrationRow& row : result.scan) by_k[row.k] = row;
  EXPECT_FALSE(by_k[1].relaxed);
  EXPECT_EQ(by_k[1].population_used, 10);
  EXPECT_FALSE(by_k[2].relaxed);
  ASSERT_TRUE(by_k.count(3));
  EXPECT_TRUE(by_k[3].relaxed);
  EXPECT_EQ(by_k[3].population_used, 9);
  EXPECT_NEAR(by_k[3].probability, 1.0 / 3.0, 1e-12);  // full leak: 1/k
  EXPECT_TRUE(by_k[4].relaxed);
  EXPECT_EQ(by_k[4].population_used, 8);  // 4 * floor(10/4)
}

TEST(CalibrateK, UnreachableThresholdReportsBestPoint) {
  // Full leak: risk at k = D is 1/D, so a threshold below that is
  // unreachable and the scan must say how close it got.
  CalibrationRequest request;
  request.population = 50;
  request.leak_size = 50;
  request.threshold = 0.01;
  try {
    CalibrateK(request);
    FAIL() << "expected ThresholdUnreachableError";
  } catch (const ThresholdUnreachableError& e) {
    EXPECT_EQ(e.best_k, 50);
    EXPECT_DOUBLE_EQ(e.best_probability, 0.02);
  }
}

TEST(CalibrateK, RecursiveSolverHandlesJointTargets) {
  // For n = 2 joint targets the risk is far smaller, so a threshold the
  // single-target scan cannot meet resolves at a moderate k.
  CalibrationRequest request;
  request.population = 60;
  request.leak_size = 60;
  request.threshold = 0.05;
  request.solver = CalibrationRequest::Solver::kRecursive;
  request.targets = 2;
  CalibrationResult result = CalibrateK(request);
  // P(both of two targets identified) at full leak is roughly 1/k^2.
  EXPECT_EQ(result.k_min, 5);
  EXPECT_LE(result.probability, 0.05);

  CalibrationRequest single = request;
  single.solver = CalibrationRequest::Solver::kAnalytic;
  CalibrationResult single_result = CalibrateK(single);
  EXPECT_EQ(single_result.k_min, 20);
}

TEST(CalibrateK, ValidatesRequest) {
  CalibrationRequest request;
  request.population = 100;
  request.leak_size = 10;
  request.threshold = 0.5;
  CalibrationRequest bad = request;
  bad.population = 0;
  EXPECT_THROW(CalibrateK(bad), DomainError);
  bad = request;
  bad.leak_size = 0;
  EXPECT_THROW(CalibrateK(bad), DomainError);
  bad = request;
  bad.leak_size = 101;
  EXPECT_THROW(CalibrateK(bad), DomainError);
  bad = request;
  bad.threshold = 0.0;
  EXPECT_THROW(CalibrateK(bad), DomainError);
  bad = request;
  bad.threshold = 1.5;
  EXPECT_THROW(CalibrateK(bad), DomainError);
  bad = request;
  bad.targets = 0;
  bad.solver = CalibrationRequest::Solver::kRecursive;
  EXPECT_THROW(CalibrateK(bad), DomainError);
}

TEST(FigureData, LeakGrowthChartHasAnalyticAndSimulatedSeries) {
  FigureRequest request;
  request.figure_id = "fig2";
  request.population = 200;
  request.trials = 80;
  request.seed = 3;
  std::vector<FigureRow> rows = FigureData(request);
  ASSERT_FALSE(rows.empty());

  std::set<std::string> names = SeriesNames(rows);
  // Every class size contributes an analytic and a simulated series.
  for (const std::string& prefix : {"analytic_k", "simulated_k"}) {
    int found = 0;
    for (const std::string& name : names) {
      if (name.rfind(prefix, 0) == 0) ++found;
    }
    EXPECT_GE(found, 4) << prefix;
  }

  // Analytic rows carry no interval; simulated rows carry one plus trials.
  for (const FigureRow& row : rows) {
    if (row.series.rfind("analytic", 0) == 0) {
      EXPECT_FALSE(row.ci_low.has_value());
      EXPECT_FALSE(row.trials.has_value());
    } else {
      EXPECT_TRUE(row.ci_low.has_value());
      EXPECT_TRUE(row.ci_high.has_value());
      ASSERT_TRUE(row.trials.has_value());
      EXPECT_EQ(*row.trials, 80);
      EXPECT_LE(*row.ci_low, row.y);
      EXPECT_GE(*row.ci_high, row.y);
    }
    EXPECT_GE(row.y, 0.0);
    EXPECT_LE(row.y, 1.0);
  }

  // Along each analytic series the risk grows with the leak.
  std::vector<FigureRow> k5 = SeriesRows(rows, "analytic_k=5");
  ASSERT_GE(k5.size(), 2u);
  for (size_t i = 1; i < k5.size(); ++i) {
    EXPECT_GT(k5[i].x, k5[i - 1].x);
    EXPECT_GE(k5[i].y, k5[i - 1].y - 1e-15);
  }
}

TEST(FigureData, SimulatedSeriesTracksAnalyticSeries) {
  FigureRequest request;
  request.figure_id = "fig2";
  request.population = 400;
  request.trials = 300;
  request.seed = 12;
  request.threads = 4;
  std::vector<FigureRow> rows = FigureData(request);
  std::vector<FigureRow> analytic = SeriesRows(rows, "analytic_k=5");
  std::vector<FigureRow> simulated = SeriesRows(rows, "simulated_k=5");
  ASSERT_EQ(analytic.size(), simulated.size());
  for (size_t i = 0; i < analytic.size(); ++i) {
    EXPECT_EQ(simulated[i].x, analytic[i].x);
    double half_width = (*simulated[i].ci_high - *simulated[i].ci_low) / 2;
    EXPECT_NEAR(simulated[i].y, analytic[i].y,
                std::max(3.0 * half_width / 1.96, 1e-9))
        << "x=" << simulated[i].x;
  }
}

TEST(FigureData, ClassSizeChartIncludesHistograms) {
  FigureRequest request;
  request.figure_id = "fig3a";
  request.population = 120;
  request.trials = 60;
  request.seed = 4;
  std::vector<FigureRow> rows = FigureData(request);
  std::set<std::string> names = SeriesNames(rows);
  EXPECT_TRUE(names.count("analytic"));
  EXPECT_TRUE(names.count("simulated"));
  bool has_histogram = false;
  for (const std::string& name : names) {
    has_histogram |= name.rfind("hist_k", 0) == 0;
  }
  EXPECT_TRUE(has_histogram);

  // Histogram series: x is a risk level, y a frequency; mass sums to ~1.
  for (const std::string& name : names) {
    if (name.rfind("hist_k", 0) != 0) continue;
    double total = 0.0;
    for (const FigureRow& row : SeriesRows(rows, name)) {
      EXPECT_GE(row.x, 0.0);
      EXPECT_LE(row.x, 1.0);
      total += row.y;
    }
    EXPECT_NEAR(total, 1.0, 1e-9) << name;
  }
}

TEST(FigureData, LeakChartAtFixedClassSize) {
  FigureRequest request;
  request.figure_id = "fig3b";
  request.population = 100;
  request.trials = 50;
  request.seed = 5;
  std::vector<FigureRow> rows = FigureData(request);
  std::set<std::string> names = SeriesNames(rows);
  EXPECT_TRUE(names.count("analytic"));
  EXPECT_TRUE(names.count("simulated"));
  bool has_histogram = false;
  for (const std::string& name : names) {
    has_histogram |= name.rfind("hist_L", 0) == 0;
  }
  EXPECT_TRUE(has_histogram);
}

TEST(FigureData, JointTargetChartsUseRecursion) {
  FigureRequest fig4a;
  fig4a.figure_id = "fig4a";
  fig4a.population = 60;
  fig4a.trials = 60;
  fig4a.seed = 6;
  std::vector<FigureRow> rows = FigureData(fig4a);
  std::set<std::string> names = SeriesNames(rows);
  bool recursive_series = false;
  bool simulated_series = false;
  for (const std::string& name : names) {
    recursive_series |= name.rfind("recursive_k", 0) == 0;
    simulated_series |= name.rfind("simulated_k", 0) == 0;
  }
  EXPECT_TRUE(recursive_series);
  EXPECT_TRUE(simulated_series);
  // x is the number of joint targets, starting at 1.
  for (const FigureRow& row : rows) {
    EXPECT_GE(row.x, 1.0);
  }
  // Joint risk cannot grow with more targets.
  for (const std::string& name : names) {
    if (name.rfind("recursive_k", 0) != 0) continue;
    std::vector<FigureRow> series = SeriesRows(rows, name);
    for (size_t i = 1; i < series.size(); ++i) {
      EXPECT_LE(series[i].y, series[i - 1].y + 1e-12) << name;
    }
  }

  FigureRequest fig4b = fig4a;
  fig4b.figure_id = "fig4b";
  std::vector<FigureRow> growth = FigureData(fig4b);
  bool target_series = false;
  for (const std::string& name : SeriesNames(growth)) {
    target_series |= name.rfind("recursive_n", 0) == 0;
  }
  EXPECT_TRUE(target_series);
}

TEST(FigureData, LayoutComparisonChartReportsSamples) {
  FigureRequest request;
  request.figure_id = "fig5";
  request.population = 60;
  request.seed = 7;
  std::vector<FigureRow> rows = FigureData(request);
  std::set<std::string> names = SeriesNames(rows);
  ASSERT_TRUE(names.count("homogeneous"));
  EXPECT_GE(names.size(), 2u);  // at least one sampled layout
  EXPECT_FALSE(SeriesRows(rows, "homogeneous").empty());
  for (const FigureRow& row : rows) {
    EXPECT_GE(row.x, 1.0);  // x is the joint-target count
  }
  for (const std::string& name : names) {
    if (name == "homogeneous") continue;
    EXPECT_EQ(name.rfind("sample_", 0), 0u) << name;
  }
}

TEST(FigureData, UnknownChartIdRaises) {
  FigureRequest request;
  request.figure_id = "fig9";
  EXPECT_THROW(FigureData(request), DomainError);
  request.figure_id = "";
  EXPECT_THROW(FigureData(request), DomainError);
}

TEST(FigureData, SameSeedReproducesIdenticalRows) {
  FigureRequest request;
  request.figure_id = "fig3b";
  request.population = 80;
  request.trials = 40;
  request.seed = 21;
  std::vector<FigureRow> a = FigureData(request);
  request.threads = 5;
  std::vector<FigureRow> b = FigureData(request);
  ASSERT_EQ(a.size(), b.size());
  for (size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].series, b[i].series);
    EXPECT_EQ(a[i].x, b[i].x);
    EXPECT_EQ(a[i].y, b[i].y);
  }
}

TEST(CompareClassDistributions, HomogeneousLayoutDominates) {
  CompareRequest request;
  request.population = 100;
  request.k_min = 5;
  request.samples = 12;
  request.max_targets = 8;
  request.seed = 9;
  CompareResult result = CompareClassDistributions(request);
  EXPECT_TRUE(result.violations.empty());

  std::map<int64_t, double> baseline;
  std::map<std::string, std::vector<CompareRow>> by_series;
  for (const CompareRow& row : result.rows) {
    if (row.series == "homogeneous") {
      baseline[row.targets] = row.probability;
    }
    by_series[row.series].push_back(row);
  }
  ASSERT_EQ(baseline.size(), 8u);
  ASSERT_EQ(by_series.size(), 13u);  // homogeneous + 12 samples
  for (const auto& [series, rows] : by_series) {
    if (series == "homogeneous") continue;
    ASSERT_EQ(rows.size(), 8u) << series;
    for (const CompareRow& row : rows) {
      EXPECT_LE(row.probability,
                baseline[row.targets] * (1.0 + 1e-9) + 1e-12)
          << series << " n=" << row.targets;
    }
  }
}

TEST(CompareClassDistributions, ZeroSpreadReproducesBaseline) {
  // stddev 0 collapses sampling onto the homogeneous layout, so every
  // sampled series must coincide with the baseline.
  CompareRequest request;
  request.population = 60;
  request.k_min = 5;
  request.samples = 3;
  request.max_targets = 5;
  request.stddev = 0.0;
  request.seed = 2;
  CompareResult result = CompareClassDistributions(request);
  EXPECT_TRUE(result.violations.empty());
  std::map<int64_t, double> baseline;
  for (const CompareRow& row : result.rows) {
    if (row.series == "homogeneous") baseline[row.targets] = row.probability;
  }
  for (const CompareRow& row : result.rows) {
    EXPECT_DOUBLE_EQ(row.probability, baseline[row.targets]) << row.series;
  }
}

TEST(CompareClassDistributions, ValidatesRequest) {
  CompareRequest request;
  request.population = 10;
  request.k_min = 20;  // larger than the population
  EXPECT_THROW(CompareClassDistributions(request), DomainError);
  request.k_min = 0;
  EXPECT_THROW(CompareClassDistributions(request), DomainError);
  request.population = 100;
  request.k_min = 5;
  request.samples = 0;
  EXPECT_THROW(CompareClassDistributions(request), DomainError);
  request.samples = 2;
  request.max_targets = 0;
  EXPECT_THROW(CompareClassDistributions(request), DomainError);
}

TEST(CompareClassDistributions, SampledClassesRespectTheFloor) {
  // Sampled layouts never contain a class below k_min, and they partition
  // the same divisible sub-population the baseline uses.
  CompareRequest request;
  request.population = 103;  // 5 * 20 + 3: exercises the trimmed total
  request.k_min = 5;
  request.samples = 6;
  request.max_targets = 4;
  request.seed = 31;
  CompareResult result = CompareClassDistributions(request);
  EXPECT_TRUE(result.violations.empty());
  // All series carry max_targets rows with probabilities in (0, 1].
  std::map<std::string, int> rows_per_series;
  for (const CompareRow& row : result.rows) {
    ++rows_per_series[row.series];
    EXPECT_GT(row.probability, 0.0);
    EXPECT_LE(row.probability, 1.0);
  }
  for (const auto& [series, count] : rows_per_series) {
    EXPECT_EQ(count, 4) << series;
  }
}

}  // namespace
}  // namespace reident
