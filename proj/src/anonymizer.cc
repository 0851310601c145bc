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

#include "reident/anonymizer.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "reident/error.h"
#include "reident/rng.h"
#include "reident/table.h"

namespace reident {
namespace {

constexpr char kSuppressedLabel[] = "*";

// Shortest decimal form that parses back to the same double ("48", "0.5").
std::string FormatNumber(double value) {
  char buf[64];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, end);
}

bool ParseNumber(const std::string& text, double* out) {
  const char* begin = text.data();
  const char* end = begin + text.size();
  while (begin < end && (*begin == ' ' || *begin == '\t')) {
    ++begin;
  }
  while (end > begin && (end[-1] == ' ' || end[-1] == '\t')) {
    --end;
  }
  if (begin == end) {
    return false;
  }
  const auto [ptr, ec] = std::from_chars(begin, end, *out);
  return ec == std::errc() && ptr == end;
}

double BinLow(const GeneralizationRule& rule, double value) {
  return rule.anchor +
         rule.width * std::floor((value - rule.anchor) / rule.width);
}

std::string BinLabel(const GeneralizationRule& rule, double low) {
  return "[" + FormatNumber(low) + "," + FormatNumber(low + rule.width) + ")";
}

// Recognizes a label this rule itself produced, for idempotence.
bool IsOwnBinLabel(const GeneralizationRule& rule, const std::string& value) {
  if (value.size() < 5 || value.front() != '[' || value.back() != ')') {
    return false;
  }
  const size_t comma = value.find(',');
  if (comma == std::string::npos) {
    return false;
  }
  double low = 0.0;
  if (!ParseNumber(value.substr(1, comma - 1), &low)) {
    return false;
  }
  return BinLow(rule, low) == low && BinLabel(rule, low) == value;
}

std::string GeneralizeNumeric(const GeneralizationRule& rule,
                              const std::string& value) {
  if (IsOwnBinLabel(rule, value)) {
    return value;
  }
  double v = 0.0;
  if (!ParseNumber(value, &v)) {
    throw ParseError("value '" + value +
                     "' is not numeric under a numeric binning rule");
  }
  return BinLabel(rule, BinLow(rule, v));
}

std::string TakePrefix(const std::string& value, int64_t code_points) {
  size_t i = 0;
  int64_t taken = 0;
  while (i < value.size() && taken < code_points) {
    ++i;
    while (i < value.size() && (static_cast<unsigned char>(value[i]) & 0xC0) ==
                                   0x80) {  // UTF-8 continuation byte
      ++i;
    }
    ++taken;
  }
  return value.substr(0, i);
}

std::string GeneralizeCategory(const GeneralizationRule& rule,
                               const std::string& value) {
  const auto it = rule.category_map.find(value);
  if (it != rule.category_map.end()) {
    return it->second;
  }
  for (const auto& [from, to] : rule.category_map) {
    if (to == value) {
      return value;  // already a group label
    }
  }
  throw ParseError("value '" + value + "' missing from the category map");
}

GeneralizationRule RuleFromJson(const std::string& column,
                                const nlohmann::json& spec) {
  const auto fail = [&](const std::string& what) -> ParseError {
    return ParseError("schema column '" + column + "': " + what);
  };
  if (!spec.is_object() || !spec.contains("kind") ||
      !spec["kind"].is_string()) {
    throw fail("rule needs a string 'kind'");
  }
  const std::string kind = spec["kind"].get<std::string>();
  GeneralizationRule rule;
  if (kind == "numericBin") {
    rule.kind = GeneralizationRule::Kind::kNumericBin;
    if (!spec.contains("width") || !spec["width"].is_number()) {
      throw fail("numericBin needs a numeric 'width'");
    }
    rule.width = spec["width"].get<double>();
    rule.anchor = spec.value("anchor", 0.0);
    if (!(rule.width > 0.0)) {
      throw fail("numericBin width must be positive");
    }
  } else if (kind == "stringPrefix") {
    rule.kind = GeneralizationRule::Kind::kStringPrefix;
    if (!spec.contains("length") || !spec["length"].is_number_integer()) {
      throw fail("stringPrefix needs an integer 'length'");
    }
    rule.prefix_length = spec["length"].get<int64_t>();
    if (rule.prefix_length < 0) {
      throw fail("stringPrefix length must be >= 0");
    }
  } else if (kind == "categoryMap") {
    rule.kind = GeneralizationRule::Kind::kCategoryMap;
    if (!spec.contains("map") || !spec["map"].is_object()) {
      throw fail("categoryMap needs a 'map' object");
    }
    for (const auto& [from, to] : spec["map"].items()) {
      if (!to.is_string()) {
        throw fail("categoryMap groups must be strings");
      }
      rule.category_map.emplace(from, to.get<std::string>());
    }
    if (rule.category_map.empty()) {
      throw fail("categoryMap must not be empty");
    }
  } else if (kind == "suppress") {
    rule.kind = GeneralizationRule::Kind::kSuppress;
  } else {
    throw fail("unknown rule kind '" + kind + "'");
  }
  return rule;
}

}  // namespace

RecordSchema RecordSchema::FromJsonText(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("schema is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) {
    throw ParseError("schema root must be a JSON object");
  }
  RecordSchema schema;
  int64_t quasi_identifiers = 0;
  for (const auto& [name, spec] : doc.items()) {
    const auto fail = [&](const std::string& what) -> ParseError {
      return ParseError("schema column '" + name + "': " + what);
    };
    if (!spec.is_object() || !spec.contains("role") ||
        !spec["role"].is_string()) {
      throw fail("needs a string 'role'");
    }
    ColumnSpec column;
    column.name = name;
    const std::string role = spec["role"].get<std::string>();
    if (role == "patientKey") {
      column.role = ColumnRole::kPatientKey;
      if (!schema.patient_key_.empty()) {
        throw fail("second patientKey column (already have '" +
                   schema.patient_key_ + "')");
      }
      schema.patient_key_ = name;
    } else if (role == "directIdentifier") {
      column.role = ColumnRole::kDirectIdentifier;
    } else if (role == "quasiIdentifier") {
      column.role = ColumnRole::kQuasiIdentifier;
    } else if (role == "sensitive") {
      column.role = ColumnRole::kSensitive;
    } else {
      throw fail("unknown role '" + role + "'");
    }
    if (column.role == ColumnRole::kQuasiIdentifier) {
      if (!spec.contains("rule")) {
        throw fail("quasi-identifier needs a generalization rule");
      }
      column.rule = RuleFromJson(name, spec["rule"]);
      ++quasi_identifiers;
    } else if (spec.contains("rule")) {
      throw fail("only quasi-identifiers take generalization rules");
    }
    schema.columns_.emplace(name, std::move(column));
  }
  if (schema.patient_key_.empty()) {
    throw ParseError("schema needs exactly one patientKey column");
  }
  if (quasi_identifiers == 0) {
    throw ParseError("schema needs at least one quasi-identifier column");
  }
  return schema;
}

const ColumnSpec* RecordSchema::Find(const std::string& name) const {
  const auto it = columns_.find(name);
  return it == columns_.end() ? nullptr : &it->second;
}

Dataset ParseDataset(const std::string& text, const RecordSchema& schema,
                     char delimiter) {
  DelimitedTable table = ReadDelimited(text, delimiter);
  std::set<std::string> seen;
  for (const std::string& name : table.header) {
    if (schema.Find(name) == nullptr) {
      throw ParseError("unknown column '" + name + "'");
    }
    if (!seen.insert(name).second) {
      throw ParseError("duplicate column '" + name + "'");
    }
  }
  for (const auto& [name, column] : schema.columns()) {
    if (seen.count(name) == 0) {
      throw ParseError("missing column '" + name + "'");
    }
  }
  const size_t key_index = static_cast<size_t>(
      std::find(table.header.begin(), table.header.end(),
                schema.patient_key_column()) -
      table.header.begin());
  for (size_t i = 0; i < table.rows.size(); ++i) {
    if (table.rows[i][key_index].empty()) {
      throw ParseError("data row " + std::to_string(i + 1) +
                       ": empty patient key");
    }
  }
  Dataset dataset;
  dataset.schema = schema;
  dataset.columns = std::move(table.header);
  dataset.rows = std::move(table.rows);
  return dataset;
}

std::string Generalize(const GeneralizationRule& rule,
                       const std::string& value) {
  switch (rule.kind) {
    case GeneralizationRule::Kind::kNumericBin:
      return GeneralizeNumeric(rule, value);
    case GeneralizationRule::Kind::kStringPrefix:
      return TakePrefix(value, rule.prefix_length);
    case GeneralizationRule::Kind::kCategoryMap:
      return GeneralizeCategory(rule, value);
    case GeneralizationRule::Kind::kSuppress:
      return kSuppressedLabel;
  }
  throw ParseError("unhandled generalization rule");
}

namespace {

struct Patient {
  std::string key;
  std::vector<size_t> row_indices;                // input order
  std::set<std::vector<std::string>> tuple_set;   // class identity
  size_t class_index = 0;
};

struct EquivalenceClass {
  std::vector<size_t> patients;  // first-appearance order
  bool residual = false;
  std::string id;
};

}  // namespace

AnonymizedDataset KAnonymize(const Dataset& dataset, int64_t k,
                             UndersizedPolicy policy, uint64_t seed) {
  if (k < 1) {
    throw DomainError("k must be >= 1, got " + std::to_string(k));
  }
  const RecordSchema& schema = dataset.schema;

  std::vector<size_t> qi_indices;
  std::vector<size_t> sensitive_indices;
  size_t key_index = dataset.columns.size();
  AnonymizedDataset out;
  for (size_t i = 0; i < dataset.columns.size(); ++i) {
    const ColumnSpec* column = schema.Find(dataset.columns[i]);
    if (column == nullptr) {
      throw ParseError("column '" + dataset.columns[i] +
                       "' is missing from the schema");
    }
    switch (column->role) {
      case ColumnRole::kPatientKey:
        key_index = i;
        break;
      case ColumnRole::kDirectIdentifier:
        break;  // dropped
      case ColumnRole::kQuasiIdentifier:
        qi_indices.push_back(i);
        out.qi_columns.push_back(column->name);
        break;
      case ColumnRole::kSensitive:
        sensitive_indices.push_back(i);
        out.sensitive_columns.push_back(column->name);
        break;
    }
  }
  if (key_index == dataset.columns.size()) {
    throw ParseError("dataset lacks the patient key column '" +
                     schema.patient_key_column() + "'");
  }

  // Generalize every row once and group rows into patients.
  std::vector<std::vector<std::string>> row_tuples(dataset.rows.size());
  std::vector<Patient> patients;
  std::map<std::string, size_t> patient_by_key;
  for (size_t r = 0; r < dataset.rows.size(); ++r) {
    const auto& row = dataset.rows[r];
    std::vector<std::string> tuple;
    tuple.reserve(qi_indices.size());
    for (size_t qi : qi_indices) {
      tuple.push_back(
          Generalize(*schema.Find(dataset.columns[qi])->rule, row[qi]));
    }
    row_tuples[r] = std::move(tuple);
    const std::string& key = row[key_index];
    auto [it, inserted] = patient_by_key.emplace(key, patients.size());
    if (inserted) {
      patients.push_back(Patient{key, {}, {}, 0});
    }
    Patient& patient = patients[it->second];
    patient.row_indices.push_back(r);
    patient.tuple_set.insert(row_tuples[r]);
  }
  out.audit.patients_total = static_cast<int64_t>(patients.size());
  if (out.audit.patients_total < k) {
    throw DomainError("cannot reach k = " + std::to_string(k) +
                      " with only " + std::to_string(out.audit.patients_total) +
                      " patient(s)");
  }

  // Partition patients by identical generalized tuple set.
  std::vector<EquivalenceClass> classes;
  std::map<std::set<std::vector<std::string>>, size_t> class_by_tuples;
  for (size_t p = 0; p < patients.size(); ++p) {
    auto [it, inserted] =
        class_by_tuples.emplace(patients[p].tuple_set, classes.size());
    if (inserted) {
      classes.push_back(EquivalenceClass{});
    }
    classes[it->second].patients.push_back(p);
    patients[p].class_index = it->second;
  }

  // Repair classes below k. k = 1 never needs repair.
  std::vector<size_t> undersized;
  for (size_t c = 0; c < classes.size(); ++c) {
    if (static_cast<int64_t>(classes[c].patients.size()) < k) {
      undersized.push_back(c);
    }
  }
  std::vector<uint8_t> dropped(patients.size(), 0);
  std::vector<size_t> residual_members;  // patient indices
  if (!undersized.empty()) {
    switch (policy) {
      case UndersizedPolicy::kStrict:
        throw DomainError(std::to_string(undersized.size()) +
                          " equivalence class(es) fall below k = " +
                          std::to_string(k));
      case UndersizedPolicy::kDrop:
        for (size_t c : undersized) {
          for (size_t p : classes[c].patients) {
            dropped[p] = 1;
          }
          classes[c].patients.clear();
        }
        break;
      case UndersizedPolicy::kMerge: {
        for (size_t c : undersized) {
          for (size_t p : classes[c].patients) {
            residual_members.push_back(p);
          }
          classes[c].patients.clear();
        }
        // The pooled leftovers may still fall short; fold in the smallest
        // valid classes until the residual itself satisfies k.
        if (static_cast<int64_t>(residual_members.size()) < k) {
          std::vector<size_t> by_size;
          for (size_t c = 0; c < classes.size(); ++c) {
            if (!classes[c].patients.empty()) {
              by_size.push_back(c);
            }
          }
          std::stable_sort(by_size.begin(), by_size.end(),
                           [&](size_t a, size_t b) {
                             return classes[a].patients.size() <
                                    classes[b].patients.size();
                           });
          for (size_t c : by_size) {
            if (static_cast<int64_t>(residual_members.size()) >= k) {
              break;
            }
            for (size_t p : classes[c].patients) {
              residual_members.push_back(p);
            }
            classes[c].patients.clear();
          }
        }
        if (static_cast<int64_t>(residual_members.size()) < k) {
          throw DomainError(
              "cannot reach k = " + std::to_string(k) + " with only " +
              std::to_string(out.audit.patients_total) + " patient(s)");
        }
        break;
      }
    }
  }
  out.audit.patients_suppressed =
      static_cast<int64_t>(residual_members.size());
  out.audit.patients_dropped =
      static_cast<int64_t>(std::count(dropped.begin(), dropped.end(), 1));

  // Class ids by first appearance; the residual class is C0 and sorts last.
  std::vector<size_t> output_order;
  for (size_t c = 0; c < classes.size(); ++c) {
    if (!classes[c].patients.empty()) {
      output_order.push_back(c);
    }
  }
  int64_t next_id = 1;
  for (size_t c : output_order) {
    classes[c].id = "C" + std::to_string(next_id++);
  }
  if (!residual_members.empty()) {
    std::sort(residual_members.begin(), residual_members.end());
    classes.push_back(EquivalenceClass{residual_members, true, "C0"});
    output_order.push_back(classes.size() - 1);
    out.audit.residual_class_id = "C0";
    for (size_t p : residual_members) {
      patients[p].class_index = classes.size() - 1;
    }
  } else {
    for (size_t c : output_order) {
      for (size_t p : classes[c].patients) {
        patients[p].class_index = c;
      }
    }
  }
  out.audit.class_count = static_cast<int64_t>(output_order.size());

  // Shuffled sequential pseudonyms for retained patients.
  std::vector<size_t> retained;
  for (size_t p = 0; p < patients.size(); ++p) {
    if (!dropped[p]) {
      retained.push_back(p);
    }
  }
  std::vector<int64_t> pseudonyms(retained.size());
  for (size_t i = 0; i < pseudonyms.size(); ++i) {
    pseudonyms[i] = static_cast<int64_t>(i) + 1;
  }
  TrialRng rng(seed, 0);
  for (size_t i = 0; i + 1 < pseudonyms.size(); ++i) {
    const size_t j =
        i + static_cast<size_t>(rng.UniformBelow(
                static_cast<int64_t>(pseudonyms.size() - i)));
    std::swap(pseudonyms[i], pseudonyms[j]);
  }
  std::vector<int64_t> pseudonym_of(patients.size(), 0);
  for (size_t i = 0; i < retained.size(); ++i) {
    pseudonym_of[retained[i]] = pseudonyms[i];
  }

  out.columns.push_back("pseudonym");
  out.columns.push_back("class");
  out.columns.insert(out.columns.end(), out.qi_columns.begin(),
                     out.qi_columns.end());
  out.columns.insert(out.columns.end(), out.sensitive_columns.begin(),
                     out.sensitive_columns.end());

  for (size_t r = 0; r < dataset.rows.size(); ++r) {
    const size_t p = patient_by_key.at(dataset.rows[r][key_index]);
    if (dropped[p]) {
      continue;
    }
    const EquivalenceClass& cls = classes[patients[p].class_index];
    AnonymizedRecord record;
    record.pseudonym = pseudonym_of[p];
    record.class_id = cls.id;
    if (cls.residual) {
      record.cells.assign(qi_indices.size(), kSuppressedLabel);
    } else {
      record.cells = row_tuples[r];
    }
    for (size_t s : sensitive_indices) {
      record.cells.push_back(dataset.rows[r][s]);
    }
    out.records.push_back(std::move(record));
  }
  return out;
}

ClassSizeDistribution ClassHistogram(const AnonymizedDataset& dataset) {
  std::map<std::string, std::set<int64_t>> members;
  for (const auto& record : dataset.records) {
    members[record.class_id].insert(record.pseudonym);
  }
  std::vector<int64_t> counts;
  for (const auto& [id, patients] : members) {
    const size_t size = patients.size();
    if (counts.size() <= size) {
      counts.resize(size + 1, 0);
    }
    ++counts[size];
  }
  return ClassSizeDistribution(std::move(counts));
}

std::vector<AnonymityViolation> VerifyKAnonymity(
    const AnonymizedDataset& dataset, int64_t k) {
  const size_t qi_count = dataset.qi_columns.size();
  struct PatientView {
    std::string class_id;
    std::set<std::vector<std::string>> tuples;
    bool split = false;
  };
  std::map<int64_t, PatientView> by_pseudonym;
  std::vector<std::string> class_order;
  std::set<std::string> class_seen;
  for (const auto& record : dataset.records) {
    if (class_seen.insert(record.class_id).second) {
      class_order.push_back(record.class_id);
    }
    auto [it, inserted] =
        by_pseudonym.emplace(record.pseudonym, PatientView{});
    PatientView& view = it->second;
    if (inserted) {
      view.class_id = record.class_id;
    } else if (view.class_id != record.class_id) {
      view.split = true;
    }
    view.tuples.insert(std::vector<std::string>(
        record.cells.begin(),
        record.cells.begin() + static_cast<ptrdiff_t>(qi_count)));
  }

  std::map<std::string, std::vector<const PatientView*>> by_class;
  std::vector<AnonymityViolation> violations;
  for (const auto& [pseudonym, view] : by_pseudonym) {
    if (view.split) {
      violations.push_back(
          {view.class_id, "patient " + std::to_string(pseudonym) +
                              " appears in more than one class"});
    }
    by_class[view.class_id].push_back(&view);
  }
  for (const std::string& id : class_order) {
    const auto& members = by_class[id];
    if (static_cast<int64_t>(members.size()) < k) {
      violations.push_back(
          {id, "only " + std::to_string(members.size()) + " patient(s), k = " +
                   std::to_string(k)});
    }
    for (size_t m = 1; m < members.size(); ++m) {
      if (members[m]->tuples != members[0]->tuples) {
        violations.push_back(
            {id, "patients disagree on the generalized tuple set"});
        break;
      }
    }
  }
  return violations;
}

std::string WriteAnonymized(const AnonymizedDataset& dataset, char delimiter) {
  DelimitedTable table;
  table.header = dataset.columns;
  for (const auto& record : dataset.records) {
    std::vector<std::string> row;
    row.reserve(2 + record.cells.size());
    row.push_back(std::to_string(record.pseudonym));
    row.push_back(record.class_id);
    row.insert(row.end(), record.cells.begin(), record.cells.end());
    table.rows.push_back(std::move(row));
  }
  return WriteDelimited(table, delimiter);
}

}  // namespace reident
