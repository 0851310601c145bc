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

#include "reident/cli.h"

#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "reident/anonymizer.h"
#include "reident/attack_sim.h"
#include "reident/calibrate.h"
#include "reident/error.h"
#include "reident/probability.h"
#include "reident/risk_analytic.h"
#include "reident/risk_recursive.h"
#include "reident/scenario.h"

namespace reident {
namespace {

using nlohmann::json;

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ParseError("cannot read '" + path + "'");
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) {
    throw ParseError("failed while reading '" + path + "'");
  }
  return buffer.str();
}

void WriteFile(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw ParseError("cannot write '" + path + "'");
  }
  out << text;
  if (!out) {
    throw ParseError("failed while writing '" + path + "'");
  }
}

std::string FormatDouble(double value) {
  char buf[64];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, end);
}

json ProbabilityJson(const Probability& p) {
  json j;
  j["probability"] = p.value();
  j["log_probability"] = p.log_value();
  if (p.is_exact()) {
    j["exact"] = p.RatioString();
  }
  return j;
}

// Emission sink: JSON envelopes go to --out when given, stdout otherwise.
struct Sink {
  std::string out_path;
  std::ostream* out;

  void Emit(const std::string& text) const {
    if (out_path.empty()) {
      *out << text;
    } else {
      WriteFile(out_path, text);
    }
  }

  void EmitEnvelope(const json& params, uint64_t seed,
                    const std::string& backend, const json& result,
                    std::chrono::steady_clock::time_point started) const {
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                      started)
            .count();
    json envelope;
    envelope["params"] = params;
    envelope["seed"] = seed;
    envelope["backend"] = backend;
    envelope["result"] = result;
    envelope["timing"] = {{"seconds", seconds}};
    Emit(envelope.dump(2) + "\n");
  }
};

ClassSizeDistribution ParseClasses(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("--classes is not valid JSON: ") + e.what());
  }
  if (!doc.is_array()) {
    throw ParseError("--classes must be a JSON array of class counts");
  }
  std::vector<int64_t> counts;
  counts.reserve(doc.size());
  for (const auto& item : doc) {
    if (!item.is_number_integer()) {
      throw ParseError("--classes entries must be integers");
    }
    counts.push_back(item.get<int64_t>());
  }
  return ClassSizeDistribution(std::move(counts));
}

int64_t ResolveLeak(int64_t leak_size, double leak_fraction,
                    int64_t population) {
  if (leak_size > 0 && leak_fraction > 0.0) {
    throw DomainError("give either --leak-size or --leak-fraction, not both");
  }
  if (leak_fraction > 0.0) {
    if (leak_fraction > 1.0) {
      throw DomainError("--leak-fraction must lie in (0, 1]");
    }
    const int64_t leak = std::llround(
        leak_fraction * static_cast<double>(population));
    return std::min(std::max<int64_t>(1, leak), population);
  }
  if (leak_size <= 0) {
    throw DomainError("one of --leak-size or --leak-fraction is required");
  }
  return leak_size;
}

Backend ParseBackend(const std::string& name) {
  if (name == "auto") {
    return Backend::kAuto;
  }
  if (name == "exact") {
    return Backend::kExact;
  }
  if (name == "log") {
    return Backend::kLog;
  }
  throw DomainError("unknown backend '" + name + "'");
}

json CensusJson(const ClassSizeDistribution& classes) {
  return json(classes.counts());
}

std::string OptionalCsvCell(const std::optional<double>& value) {
  return value.has_value() ? FormatDouble(*value) : std::string();
}

std::string FigureRowsCsv(const std::vector<FigureRow>& rows) {
  std::string csv = "series,x,y,ci_low,ci_high,trials\n";
  for (const FigureRow& row : rows) {
    csv += row.series + "," + FormatDouble(row.x) + "," + FormatDouble(row.y) +
           "," + OptionalCsvCell(row.ci_low) + "," +
           OptionalCsvCell(row.ci_high) + ",";
    if (row.trials.has_value()) {
      csv += std::to_string(*row.trials);
    }
    csv += "\n";
  }
  return csv;
}

json FigureRowsJson(const std::vector<FigureRow>& rows) {
  json array = json::array();
  for (const FigureRow& row : rows) {
    json j;
    j["series"] = row.series;
    j["x"] = row.x;
    j["y"] = row.y;
    if (row.ci_low.has_value()) {
      j["ci_low"] = *row.ci_low;
    }
    if (row.ci_high.has_value()) {
      j["ci_high"] = *row.ci_high;
    }
    if (row.trials.has_value()) {
      j["trials"] = *row.trials;
    }
    array.push_back(std::move(j));
  }
  return array;
}

json EstimateJson(const RiskEstimate& estimate, bool with_histogram) {
  json j;
  j["mean"] = estimate.mean;
  j["standard_error"] = estimate.standard_error;
  j["ci95_low"] = estimate.ci95_low;
  j["ci95_high"] = estimate.ci95_high;
  j["trials"] = estimate.trials;
  if (with_histogram) {
    json bins = json::array();
    for (const HistogramBin& bin : estimate.histogram) {
      bins.push_back({{"risk_low", bin.risk_low},
                      {"risk_high", bin.risk_high},
                      {"count", bin.count},
                      {"frequency", bin.frequency}});
    }
    j["histogram"] = std::move(bins);
  }
  return j;
}

std::string HistogramCsv(const RiskEstimate& estimate) {
  std::string csv = "bin_low,bin_high,frequency\n";
  for (const HistogramBin& bin : estimate.histogram) {
    csv += FormatDouble(bin.risk_low) + "," + FormatDouble(bin.risk_high) +
           "," + FormatDouble(bin.frequency) + "\n";
  }
  return csv;
}

}  // namespace

int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err) {
  CLI::App app{"k-anonymity re-identification risk toolkit"};
  app.require_subcommand(1);

  // analytic ---------------------------------------------------------------
  int64_t an_population = 0;
  int64_t an_leak = 0;
  double an_fraction = 0.0;
  int64_t an_k = 0;
  std::string an_backend = "auto";
  std::string an_out;
  CLI::App* analytic = app.add_subcommand(
      "analytic", "Single-target risk for homogeneous classes, closed form");
  analytic->add_option("-D,--dataset-size", an_population, "Population size")
      ->required();
  analytic->add_option("-L,--leak-size", an_leak, "Leaked patient histories");
  analytic->add_option("--leak-fraction", an_fraction,
                       "Leak size as a fraction of the population");
  analytic->add_option("--k", an_k, "Equivalence class size")->required();
  analytic->add_option("--backend", an_backend, "auto, exact or log");
  analytic->add_option("--out", an_out, "Write the JSON envelope here");

  // recursive --------------------------------------------------------------
  int64_t re_population = 0;
  int64_t re_k = 0;
  std::string re_classes;
  int64_t re_leak = 0;
  double re_fraction = 0.0;
  int64_t re_targets = 1;
  std::string re_backend = "auto";
  std::string re_out;
  CLI::App* recursive = app.add_subcommand(
      "recursive", "Joint risk for several targets over a class census");
  recursive->add_option("--classes", re_classes,
                        "JSON array; entry i counts classes of size i");
  recursive->add_option("-D,--dataset-size", re_population,
                        "Population size (homogeneous shortcut, with --k)");
  recursive->add_option("--k", re_k,
                        "Class size (homogeneous shortcut, with -D)");
  recursive->add_option("-L,--leak-size", re_leak, "Leaked patient histories");
  recursive->add_option("--leak-fraction", re_fraction,
                        "Leak size as a fraction of the population");
  recursive->add_option("-n,--targets", re_targets,
                        "Number of patients to re-identify jointly");
  recursive->add_option("--backend", re_backend, "auto, exact or log");
  recursive->add_option("--out", re_out, "Write the JSON envelope here");

  // simulate ---------------------------------------------------------------
  int64_t si_population = 0;
  int64_t si_k = 0;
  std::string si_classes;
  int64_t si_leak = 0;
  double si_fraction = 0.0;
  int64_t si_targets = 0;
  int64_t si_trials = 1000;
  uint64_t si_seed = 0;
  int si_threads = 1;
  std::string si_ci = "normal";
  int64_t si_resamples = 1000;
  bool si_histogram = false;
  std::string si_hist_out;
  std::string si_out;
  CLI::App* simulate = app.add_subcommand(
      "simulate", "Monte Carlo attack trials with confidence intervals");
  simulate->add_option("--classes", si_classes,
                       "JSON array; entry i counts classes of size i");
  simulate->add_option("-D,--dataset-size", si_population,
                       "Population size (homogeneous shortcut, with --k)");
  simulate->add_option("--k", si_k,
                       "Class size (homogeneous shortcut, with -D)");
  simulate->add_option("-L,--leak-size", si_leak, "Leaked patient histories");
  simulate->add_option("--leak-fraction", si_fraction,
                       "Leak size as a fraction of the population");
  simulate->add_option("-n,--targets", si_targets,
                       "Joint targets; omit for the single-target estimate");
  simulate->add_option("--trials", si_trials, "Monte Carlo trials");
  simulate->add_option("--seed", si_seed, "Master seed")
      ->envname("REIDENT_SEED");
  simulate->add_option("--threads", si_threads, "Worker threads");
  simulate->add_option("--ci", si_ci, "normal or bootstrap")
      ->check(CLI::IsMember({"normal", "bootstrap"}));
  simulate->add_option("--bootstrap-resamples", si_resamples,
                       "Resamples for the bootstrap interval");
  simulate->add_flag("--histogram", si_histogram,
                     "Include the per-patient risk histogram");
  simulate->add_option("--hist-out", si_hist_out,
                       "Write the histogram as CSV here");
  simulate->add_option("--out", si_out, "Write the JSON envelope here");

  // anonymize --------------------------------------------------------------
  std::string anon_input;
  std::string anon_schema;
  int64_t anon_k = 0;
  std::string anon_policy = "merge";
  uint64_t anon_seed = 0;
  std::string anon_delimiter = ",";
  std::string anon_out;
  CLI::App* anonymize = app.add_subcommand(
      "anonymize", "Generalize a tabular dataset into k-anonymous classes");
  anonymize->add_option("--input", anon_input, "Delimited input table")
      ->required();
  anonymize->add_option("--schema", anon_schema, "JSON column schema")
      ->required();
  anonymize->add_option("--k", anon_k, "Minimum patients per class")
      ->required();
  anonymize->add_option("--policy", anon_policy,
                        "Undersized classes: merge, drop or strict")
      ->check(CLI::IsMember({"merge", "drop", "strict"}));
  anonymize->add_option("--seed", anon_seed, "Pseudonym shuffle seed")
      ->envname("REIDENT_SEED");
  anonymize->add_option("--delimiter", anon_delimiter,
                        "Field delimiter (one character)");
  anonymize
      ->add_option("--out", anon_out, "Write the anonymized table here")
      ->required();

  // calibrate --------------------------------------------------------------
  int64_t ca_population = 0;
  int64_t ca_leak = 0;
  double ca_fraction = 0.0;
  double ca_threshold = 0.0;
  std::string ca_solver = "analytic";
  int64_t ca_targets = 1;
  std::string ca_backend = "auto";
  std::string ca_out;
  CLI::App* calibrate = app.add_subcommand(
      "calibrate", "Smallest class size meeting a risk threshold");
  calibrate->add_option("-D,--dataset-size", ca_population, "Population size")
      ->required();
  calibrate->add_option("-L,--leak-size", ca_leak, "Leaked patient histories");
  calibrate->add_option("--leak-fraction", ca_fraction,
                        "Leak size as a fraction of the population");
  calibrate->add_option("--threshold", ca_threshold,
                        "Acceptable re-identification probability, (0,1]")
      ->required();
  calibrate->add_option("--solver", ca_solver, "analytic or recursive")
      ->check(CLI::IsMember({"analytic", "recursive"}));
  calibrate->add_option("-n,--targets", ca_targets,
                        "Joint targets (recursive solver)");
  calibrate->add_option("--backend", ca_backend, "auto, exact or log");
  calibrate->add_option("--out", ca_out, "Write the JSON envelope here");

  // sweep ------------------------------------------------------------------
  std::string sw_figure;
  int64_t sw_population = 10000;
  std::vector<int64_t> sw_ks;
  std::vector<int64_t> sw_leaks;
  int64_t sw_trials = 1000;
  uint64_t sw_seed = 0;
  int sw_threads = 1;
  std::string sw_backend = "auto";
  std::string sw_format = "json";
  std::string sw_out;
  CLI::App* sweep = app.add_subcommand(
      "sweep", "Replot-ready grids: report figures or custom analytic grids");
  sweep->add_option("--figure", sw_figure,
                    "fig2, fig3a, fig3b, fig4a, fig4b or fig5");
  sweep->add_option("-D,--dataset-size", sw_population, "Population size");
  sweep->add_option("--k", sw_ks, "Class sizes for a custom analytic grid");
  sweep->add_option("-L,--leak-size", sw_leaks,
                    "Leak sizes for a custom analytic grid");
  sweep->add_option("--trials", sw_trials, "Trials per simulated point");
  sweep->add_option("--seed", sw_seed, "Master seed")
      ->envname("REIDENT_SEED");
  sweep->add_option("--threads", sw_threads, "Worker threads");
  sweep->add_option("--backend", sw_backend, "auto, exact or log");
  sweep->add_option("--format", sw_format, "json or csv")
      ->check(CLI::IsMember({"json", "csv"}));
  sweep->add_option("--out", sw_out, "Write the output here");

  // compare ----------------------------------------------------------------
  int64_t cm_population = 0;
  int64_t cm_kmin = 5;
  int64_t cm_samples = 20;
  int64_t cm_max_targets = 15;
  double cm_stddev = -1.0;
  uint64_t cm_seed = 0;
  std::string cm_backend = "auto";
  std::string cm_format = "json";
  std::string cm_out;
  CLI::App* compare = app.add_subcommand(
      "compare",
      "Homogeneous versus sampled heterogeneous class layouts at full leak");
  compare->add_option("-D,--dataset-size", cm_population, "Population size")
      ->required();
  compare->add_option("--k-min", cm_kmin, "Smallest allowed class size");
  compare->add_option("--samples", cm_samples, "Heterogeneous layouts");
  compare->add_option("--max-targets", cm_max_targets,
                      "Evaluate n = 1..max-targets");
  compare->add_option("--stddev", cm_stddev,
                      "Class size spread; negative means k-min/2");
  compare->add_option("--seed", cm_seed, "Master seed")
      ->envname("REIDENT_SEED");
  compare->add_option("--backend", cm_backend, "auto, exact or log");
  compare->add_option("--format", cm_format, "json or csv")
      ->check(CLI::IsMember({"json", "csv"}));
  compare->add_option("--out", cm_out, "Write the output here");

  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  argv.push_back("reident");
  for (const std::string& arg : args) {
    argv.push_back(arg.c_str());
  }
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      return app.exit(e, out, err);  // help text
    }
    app.exit(e, out, err);
    err << app.help();
    return 2;
  }

  const auto started = std::chrono::steady_clock::now();
  try {
    if (analytic->parsed()) {
      const Backend backend = ParseBackend(an_backend);
      const int64_t leak = ResolveLeak(an_leak, an_fraction, an_population);
      const AttackScenario scenario =
          AttackScenario::Uniform(an_population, leak, an_k);
      const Probability risk = SingleRisk(scenario, backend);
      json params;
      params["dataset_size"] = an_population;
      params["k"] = an_k;
      params["leak_size"] = leak;
      Sink{an_out, &out}.EmitEnvelope(
          params, 0,
          BackendName(ResolveBackend(backend, an_population)),
          ProbabilityJson(risk), started);
      return 0;
    }

    if (recursive->parsed()) {
      const Backend backend = ParseBackend(re_backend);
      ClassSizeDistribution classes;
      if (!re_classes.empty()) {
        if (re_population != 0 || re_k != 0) {
          throw DomainError("--classes excludes -D/--k");
        }
        classes = ParseClasses(re_classes);
      } else {
        if (re_population == 0 || re_k == 0) {
          throw DomainError("give --classes, or -D together with --k");
        }
        classes = ClassSizeDistribution::Homogeneous(re_population, re_k);
      }
      const int64_t population = classes.Population();
      const int64_t leak = ResolveLeak(re_leak, re_fraction, population);
      const RecursionState state{classes, leak, re_targets};
      const Probability risk = MultiPatientRisk(state, backend);
      json params;
      params["classes"] = CensusJson(classes);
      params["leak_size"] = leak;
      params["targets"] = re_targets;
      Sink{re_out, &out}.EmitEnvelope(
          params, 0, BackendName(ResolveBackend(backend, population)),
          ProbabilityJson(risk), started);
      return 0;
    }

    if (simulate->parsed()) {
      ClassSizeDistribution classes;
      if (!si_classes.empty()) {
        if (si_population != 0 || si_k != 0) {
          throw DomainError("--classes excludes -D/--k");
        }
        classes = ParseClasses(si_classes);
      } else {
        if (si_population == 0 || si_k == 0) {
          throw DomainError("give --classes, or -D together with --k");
        }
        classes = ClassSizeDistribution::Homogeneous(si_population, si_k);
      }
      const int64_t population = classes.Population();
      const int64_t leak = ResolveLeak(si_leak, si_fraction, population);
      const AttackScenario scenario = AttackScenario::Create(leak, classes);
      const bool want_histogram = si_histogram || !si_hist_out.empty();
      if (si_targets > 0 && want_histogram) {
        throw DomainError(
            "per-patient histograms only apply to single-target simulation");
      }
      SimOptions options;
      options.trials = si_trials;
      options.seed = si_seed;
      options.threads = si_threads;
      options.histogram = want_histogram;
      options.ci = si_ci == "bootstrap" ? SimOptions::Ci::kBootstrap
                                        : SimOptions::Ci::kNormal;
      options.bootstrap_resamples = si_resamples;
      const RiskEstimate estimate =
          si_targets > 0 ? SimulateMulti(scenario, si_targets, options)
                         : SimulateSingle(scenario, options);
      if (!si_hist_out.empty()) {
        WriteFile(si_hist_out, HistogramCsv(estimate));
      }
      json params;
      params["classes"] = CensusJson(classes);
      params["ci"] = si_ci;
      params["leak_size"] = leak;
      params["threads"] = si_threads;
      params["trials"] = si_trials;
      if (si_targets > 0) {
        params["targets"] = si_targets;
      }
      Sink{si_out, &out}.EmitEnvelope(params, si_seed, "log",
                                      EstimateJson(estimate, want_histogram),
                                      started);
      return 0;
    }

    if (anonymize->parsed()) {
      if (anon_delimiter.size() != 1) {
        throw DomainError("--delimiter must be a single character");
      }
      const RecordSchema schema =
          RecordSchema::FromJsonText(ReadFile(anon_schema));
      const Dataset dataset =
          ParseDataset(ReadFile(anon_input), schema, anon_delimiter[0]);
      const UndersizedPolicy policy =
          anon_policy == "drop"     ? UndersizedPolicy::kDrop
          : anon_policy == "strict" ? UndersizedPolicy::kStrict
                                    : UndersizedPolicy::kMerge;
      const AnonymizedDataset anonymized =
          KAnonymize(dataset, anon_k, policy, anon_seed);
      WriteFile(anon_out, WriteAnonymized(anonymized, anon_delimiter[0]));
      json audit;
      audit["patients_total"] = anonymized.audit.patients_total;
      audit["patients_suppressed"] = anonymized.audit.patients_suppressed;
      audit["patients_dropped"] = anonymized.audit.patients_dropped;
      audit["class_count"] = anonymized.audit.class_count;
      if (anonymized.audit.residual_class_id.has_value()) {
        audit["residual_class_id"] = *anonymized.audit.residual_class_id;
      } else {
        audit["residual_class_id"] = nullptr;
      }
      json result;
      result["audit"] = std::move(audit);
      result["histogram"] = json(ClassHistogram(anonymized).counts());
      json params;
      params["delimiter"] = anon_delimiter;
      params["input"] = anon_input;
      params["k"] = anon_k;
      params["policy"] = anon_policy;
      params["schema"] = anon_schema;
      Sink{"", &out}.EmitEnvelope(params, anon_seed, "auto", result, started);
      return 0;
    }

    if (calibrate->parsed()) {
      const Backend backend = ParseBackend(ca_backend);
      const int64_t leak = ResolveLeak(ca_leak, ca_fraction, ca_population);
      CalibrationRequest request;
      request.population = ca_population;
      request.leak_size = leak;
      request.threshold = ca_threshold;
      request.solver = ca_solver == "recursive"
                           ? CalibrationRequest::Solver::kRecursive
                           : CalibrationRequest::Solver::kAnalytic;
      request.targets = ca_targets;
      request.backend = backend;
      const CalibrationResult result = CalibrateK(request);
      json scan = json::array();
      for (const CalibrationRow& row : result.scan) {
        scan.push_back({{"k", row.k},
                        {"probability", row.probability},
                        {"population_used", row.population_used},
                        {"relaxed", row.relaxed}});
      }
      json result_json;
      result_json["k_min"] = result.k_min;
      result_json["probability"] = result.probability;
      result_json["scan"] = std::move(scan);
      json params;
      params["dataset_size"] = ca_population;
      params["leak_size"] = leak;
      params["solver"] = ca_solver;
      params["targets"] = ca_targets;
      params["threshold"] = ca_threshold;
      Sink{ca_out, &out}.EmitEnvelope(
          params, 0, BackendName(ResolveBackend(backend, ca_population)),
          result_json, started);
      return 0;
    }

    if (sweep->parsed()) {
      const Backend backend = ParseBackend(sw_backend);
      json params;
      params["dataset_size"] = sw_population;
      if (!sw_figure.empty()) {
        FigureRequest request;
        request.figure_id = sw_figure;
        request.population = sw_population;
        request.trials = sw_trials;
        request.seed = sw_seed;
        request.threads = sw_threads;
        request.backend = backend;
        const std::vector<FigureRow> rows = FigureData(request);
        if (sw_format == "csv") {
          Sink{sw_out, &out}.Emit(FigureRowsCsv(rows));
          return 0;
        }
        params["figure"] = sw_figure;
        params["threads"] = sw_threads;
        params["trials"] = sw_trials;
        json result;
        result["rows"] = FigureRowsJson(rows);
        Sink{sw_out, &out}.EmitEnvelope(
            params, sw_seed, BackendName(ResolveBackend(backend, sw_population)),
            result, started);
        return 0;
      }
      if (sw_ks.empty() || sw_leaks.empty()) {
        throw DomainError("give --figure, or --k and -L grid values");
      }
      const std::vector<SweepPoint> points =
          RiskSweep(sw_population, sw_ks, sw_leaks, backend);
      if (sw_format == "csv") {
        std::string csv = "class_size,leak_size,probability,log_probability\n";
        for (const SweepPoint& point : points) {
          csv += std::to_string(point.class_size) + "," +
                 std::to_string(point.leak_size) + "," +
                 FormatDouble(point.probability.value()) + "," +
                 FormatDouble(point.probability.log_value()) + "\n";
        }
        Sink{sw_out, &out}.Emit(csv);
        return 0;
      }
      params["class_sizes"] = json(sw_ks);
      params["leak_sizes"] = json(sw_leaks);
      json rows = json::array();
      for (const SweepPoint& point : points) {
        json row = ProbabilityJson(point.probability);
        row["class_size"] = point.class_size;
        row["leak_size"] = point.leak_size;
        rows.push_back(std::move(row));
      }
      json result;
      result["rows"] = std::move(rows);
      Sink{sw_out, &out}.EmitEnvelope(
          params, sw_seed, BackendName(ResolveBackend(backend, sw_population)),
          result, started);
      return 0;
    }

    if (compare->parsed()) {
      const Backend backend = ParseBackend(cm_backend);
      CompareRequest request;
      request.population = cm_population;
      request.k_min = cm_kmin;
      request.samples = cm_samples;
      request.max_targets = cm_max_targets;
      request.stddev = cm_stddev;
      request.seed = cm_seed;
      request.backend = backend;
      const CompareResult result = CompareClassDistributions(request);
      for (const std::string& violation : result.violations) {
        err << "warning: " << violation << "\n";
      }
      if (cm_format == "csv") {
        std::string csv = "series,targets,probability\n";
        for (const CompareRow& row : result.rows) {
          csv += row.series + "," + std::to_string(row.targets) + "," +
                 FormatDouble(row.probability) + "\n";
        }
        Sink{cm_out, &out}.Emit(csv);
        return 0;
      }
      json rows = json::array();
      for (const CompareRow& row : result.rows) {
        rows.push_back({{"series", row.series},
                        {"targets", row.targets},
                        {"probability", row.probability}});
      }
      json result_json;
      result_json["rows"] = std::move(rows);
      result_json["violations"] = json(result.violations);
      json params;
      params["dataset_size"] = cm_population;
      params["k_min"] = cm_kmin;
      params["max_targets"] = cm_max_targets;
      params["samples"] = cm_samples;
      params["stddev"] = cm_stddev;
      Sink{cm_out, &out}.EmitEnvelope(
          params, cm_seed, BackendName(ResolveBackend(backend, cm_population)),
          result_json, started);
      return 0;
    }
  } catch (const DomainError& e) {
    err << "domain error: " << e.what() << "\n";
    return 2;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  err << "error: no subcommand executed\n";
  return 2;
}

}  // namespace reident
