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
// Schema-driven k-anonymizer for longitudinal patient records. Patients
// (not records) are the unit of anonymity: a patient's identity within the
// output is the deduplicated set of generalized quasi-identifier tuples of
// their records, and every equivalence class groups patients whose sets
// match exactly.

#ifndef REIDENT_ANONYMIZER_H_
#define REIDENT_ANONYMIZER_H_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "reident/scenario.h"

namespace reident {

enum class ColumnRole {
  kPatientKey,        // longitudinal join key; replaced by a pseudonym
  kDirectIdentifier,  // dropped from the output entirely
  kQuasiIdentifier,   // generalized by the column's rule
  kSensitive,         // carried through untouched
};

struct GeneralizationRule {
  enum class Kind { kNumericBin, kStringPrefix, kCategoryMap, kSuppress };
  Kind kind = Kind::kSuppress;
  // kNumericBin: v falls in [anchor + width*floor((v-anchor)/width), +width),
  // labeled e.g. "[50,55)".
  double width = 0.0;
  double anchor = 0.0;
  // kStringPrefix: first `prefix_length` code points.
  int64_t prefix_length = 0;
  // kCategoryMap: value -> group; must cover every observed value.
  std::map<std::string, std::string> category_map;
};

struct ColumnSpec {
  std::string name;
  ColumnRole role = ColumnRole::kSensitive;
  std::optional<GeneralizationRule> rule;  // required for quasi-identifiers
};

class RecordSchema {
 public:
  // Parses {"column": {"role": ..., "rule": {...}}, ...}. Exactly one
  // patientKey column is required; every quasi-identifier needs a valid
  // rule. Raises ParseError on structural problems.
  static RecordSchema FromJsonText(const std::string& text);

  const ColumnSpec* Find(const std::string& name) const;
  const std::string& patient_key_column() const { return patient_key_; }
  const std::map<std::string, ColumnSpec>& columns() const { return columns_; }

 private:
  std::map<std::string, ColumnSpec> columns_;
  std::string patient_key_;
};

struct Dataset {
  RecordSchema schema;
  std::vector<std::string> columns;  // header order
  std::vector<std::vector<std::string>> rows;
};

// Reads delimited text against a schema. The header must match the schema
// exactly (no unknown, no missing columns); raises ParseError otherwise.
Dataset ParseDataset(const std::string& text, const RecordSchema& schema,
                     char delimiter = ',');

// Applies one rule to one value. Idempotent: feeding a value already
// generalized under the same rule returns it unchanged. Raises ParseError
// for values the rule cannot express (non-numeric under numericBin, values
// outside a categoryMap).
std::string Generalize(const GeneralizationRule& rule,
                       const std::string& value);

// What to do with classes smaller than k.
enum class UndersizedPolicy {
  kMerge,   // suppress their quasi-identifiers into one residual class
  kDrop,    // remove those patients from the output
  kStrict,  // refuse: DomainError
};

struct AnonymizedRecord {
  int64_t pseudonym = 0;
  std::string class_id;
  std::vector<std::string> cells;  // quasi-identifier then sensitive columns
};

struct AnonymizedDataset {
  std::vector<std::string> columns;  // pseudonym, class, then cell columns
  std::vector<std::string> qi_columns;
  std::vector<std::string> sensitive_columns;
  std::vector<AnonymizedRecord> records;

  struct Audit {
    int64_t patients_total = 0;
    int64_t patients_suppressed = 0;  // folded into the residual class
    int64_t patients_dropped = 0;
    int64_t class_count = 0;
    std::optional<std::string> residual_class_id;
  };
  Audit audit;
};

// Generalizes, groups patients into classes, repairs undersized classes per
// policy, and pseudonymizes with sequential integers assigned in an order
// shuffled by `seed`. Guarantees every output class holds >= k patients or
// throws DomainError (e.g. fewer than k patients in the whole input).
AnonymizedDataset KAnonymize(const Dataset& dataset, int64_t k,
                             UndersizedPolicy policy = UndersizedPolicy::kMerge,
                             uint64_t seed = 0);

// Census of class sizes, counted in patients.
ClassSizeDistribution ClassHistogram(const AnonymizedDataset& dataset);

struct AnonymityViolation {
  std::string class_id;
  std::string reason;
};

// Empty iff every class holds >= k patients and all patients in a class
// share an identical set of generalized quasi-identifier tuples.
std::vector<AnonymityViolation> VerifyKAnonymity(
    const AnonymizedDataset& dataset, int64_t k);

// Serializes the anonymized rows as delimited text.
std::string WriteAnonymized(const AnonymizedDataset& dataset,
                            char delimiter = ',');

}  // namespace reident

#endif  // REIDENT_ANONYMIZER_H_
