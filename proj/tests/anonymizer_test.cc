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

#include <gmpxx.h>
#include <gtest/gtest.h>

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "reident/error.h"
#include "reident/risk_recursive.h"
#include "reident/scenario.h"

namespace reident {
namespace {

std::string ReadTextFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  EXPECT_TRUE(in.is_open()) << path;
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::string DataPath(const std::string& name) {
  return std::string(REIDENT_DATA_DIR) + "/" + name;
}

Dataset LoadAdmissionsFixture() {
  RecordSchema schema =
      RecordSchema::FromJsonText(ReadTextFile(DataPath("admissions_schema.json")));
  return ParseDataset(ReadTextFile(DataPath("admissions_sample.csv")), schema);
}

// A compact inline schema used by the synthetic cases below: one patient
// key, one direct identifier, two quasi-identifiers, one sensitive column.
constexpr char kToySchema[] = R"({
  "id":    {"role": "patientKey"},
  "name":  {"role": "directIdentifier"},
  "age":   {"role": "quasiIdentifier",
            "rule": {"kind": "numericBin", "width": 5, "anchor": 50}},
  "town":  {"role": "quasiIdentifier",
            "rule": {"kind": "stringPrefix", "length": 2}},
  "note":  {"role": "sensitive"}
})";

Dataset ToyDataset(const std::string& csv) {
  return ParseDataset(csv, RecordSchema::FromJsonText(kToySchema));
}

TEST(Generalize, NumericBinning) {
  GeneralizationRule rule;
  rule.kind = GeneralizationRule::Kind::kNumericBin;
  rule.width = 5;
  rule.anchor = 50;
  EXPECT_EQ(Generalize(rule, "53"), "[50,55)");
  EXPECT_EQ(Generalize(rule, "50"), "[50,55)");
  EXPECT_EQ(Generalize(rule, "49"), "[45,50)");
  EXPECT_EQ(Generalize(rule, "2"), "[0,5)");
  EXPECT_EQ(Generalize(rule, "-1"), "[-5,0)");
  EXPECT_EQ(Generalize(rule, " 53 "), "[50,55)");  // surrounding whitespace
  EXPECT_THROW(Generalize(rule, "fifty"), ParseError);
  EXPECT_THROW(Generalize(rule, ""), ParseError);
}

TEST(Generalize, NumericBinningIsIdempotent) {
  GeneralizationRule rule;
  rule.kind = GeneralizationRule::Kind::kNumericBin;
  rule.width = 12;
  rule.anchor = 5;
  std::string label = Generalize(rule, "16");
  EXPECT_EQ(label, "[5,17)");
  EXPECT_EQ(Generalize(rule, label), label);
  EXPECT_EQ(Generalize(rule, "[-7,5)"), "[-7,5)");
}

TEST(Generalize, StringPrefix) {
  GeneralizationRule rule;
  rule.kind = GeneralizationRule::Kind::kStringPrefix;
  rule.prefix_length = 4;
  EXPECT_EQ(Generalize(rule, "OX12 6HU"), "OX12");
  EXPECT_EQ(Generalize(rule, "OX12"), "OX12");  // idempotent
  EXPECT_EQ(Generalize(rule, "OX"), "OX");      // shorter than the prefix
  rule.prefix_length = 0;
  EXPECT_EQ(Generalize(rule, "OX12"), "");
}

TEST(Generalize, StringPrefixCountsCodePoints) {
  GeneralizationRule rule;
  rule.kind = GeneralizationRule::Kind::kStringPrefix;
  rule.prefix_length = 2;
  // Two-byte code points must not be cut in half.
  EXPECT_EQ(Generalize(rule, "\xC3\xA9\xC3\xA9X"), "\xC3\xA9\xC3\xA9");
}

TEST(Generalize, CategoryMapAndSuppress) {
  GeneralizationRule map_rule;
  map_rule.kind = GeneralizationRule::Kind::kCategoryMap;
  map_rule.category_map = {{"White", "White"},
                           {"Irish", "White"},
                           {"Caribbean", "Other"}};
  EXPECT_EQ(Generalize(map_rule, "Irish"), "White");
  EXPECT_EQ(Generalize(map_rule, "White"), "White");
  // A value that is already a group label passes through.
  EXPECT_EQ(Generalize(map_rule, "Other"), "Other");
  EXPECT_THROW(Generalize(map_rule, "Martian"), ParseError);

  GeneralizationRule suppress;
  suppress.kind = GeneralizationRule::Kind::kSuppress;
  EXPECT_EQ(Generalize(suppress, "anything"), "*");
  EXPECT_EQ(Generalize(suppress, "*"), "*");
}

TEST(RecordSchema, RejectsStructuralProblems) {
  EXPECT_THROW(RecordSchema::FromJsonText("not json"), ParseError);
  EXPECT_THROW(RecordSchema::FromJsonText("{}"), ParseError);  // no key
  // Two patient keys.
  EXPECT_THROW(RecordSchema::FromJsonText(
                   R"({"a": {"role": "patientKey"},
                       "b": {"role": "patientKey"},
                       "q": {"role": "quasiIdentifier",
                             "rule": {"kind": "suppress"}}})"),
               ParseError);
  // Quasi-identifier without a rule.
  EXPECT_THROW(RecordSchema::FromJsonText(
                   R"({"a": {"role": "patientKey"},
                       "q": {"role": "quasiIdentifier"}})"),
               ParseError);
  // Rule on a sensitive column.
  EXPECT_THROW(RecordSchema::FromJsonText(
                   R"({"a": {"role": "patientKey"},
                       "q": {"role": "quasiIdentifier",
                             "rule": {"kind": "suppress"}},
                       "s": {"role": "sensitive",
                             "rule": {"kind": "suppress"}}})"),
               ParseError);
  // Nonsense role and nonsense rule kind.
  EXPECT_THROW(RecordSchema::FromJsonText(
                   R"({"a": {"role": "chief"}})"),
               ParseError);
  EXPECT_THROW(RecordSchema::FromJsonText(
                   R"({"a": {"role": "patientKey"},
                       "q": {"role": "quasiIdentifier",
                             "rule": {"kind": "teleport"}}})"),
               ParseError);
  // Non-positive bin width.
  EXPECT_THROW(RecordSchema::FromJsonText(
                   R"({"a": {"role": "patientKey"},
                       "q": {"role": "quasiIdentifier",
                             "rule": {"kind": "numericBin", "width": 0}}})"),
               ParseError);
}

TEST(ParseDataset, RejectsMismatchedHeadersAndEmptyKeys) {
  RecordSchema schema = RecordSchema::FromJsonText(kToySchema);
  // Unknown column.
  EXPECT_THROW(
      ParseDataset("id,name,age,town,note,extra\n1,x,50,AB,ok,?\n", schema),
      ParseError);
  // Missing column.
  EXPECT_THROW(ParseDataset("id,name,age,town\n1,x,50,AB\n", schema),
               ParseError);
  // Duplicate column.
  EXPECT_THROW(
      ParseDataset("id,id,name,age,town,note\n1,1,x,50,AB,ok\n", schema),
      ParseError);
  // Empty patient key, reported with its data row number.
  try {
    ParseDataset("id,name,age,town,note\n1,x,50,AB,ok\n,y,51,AC,ok\n", schema);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("row 2"), std::string::npos)
        << e.what();
  }
  EXPECT_THROW(ParseDataset("", schema), ParseError);
}

TEST(KAnonymize, PublishedAdmissionsPartition) {
  Dataset dataset = LoadAdmissionsFixture();
  AnonymizedDataset result = KAnonymize(dataset, 3);

  EXPECT_EQ(result.audit.patients_total, 10);
  EXPECT_EQ(result.audit.patients_suppressed, 0);
  EXPECT_EQ(result.audit.patients_dropped, 0);
  EXPECT_EQ(result.audit.class_count, 3);
  EXPECT_FALSE(result.audit.residual_class_id.has_value());

  // Two classes of three patients and one of four.
  ClassSizeDistribution census = ClassHistogram(result);
  EXPECT_EQ(census, ClassSizeDistribution({0, 0, 0, 2, 1}));
  EXPECT_EQ(census.Population(), 10);

  // One output record per input record, in input order.
  EXPECT_EQ(result.records.size(), 14u);
  EXPECT_TRUE(VerifyKAnonymity(result, 3).empty());

  // The four-patient class survives k = 4; the other two do not.
  std::vector<AnonymityViolation> violations = VerifyKAnonymity(result, 4);
  ASSERT_EQ(violations.size(), 2u);
  std::set<std::string> flagged;
  for (const AnonymityViolation& v : violations) {
    flagged.insert(v.class_id);
    EXPECT_NE(v.reason.find("only 3 patient(s)"), std::string::npos);
  }
  EXPECT_EQ(flagged.size(), 2u);
  EXPECT_EQ(flagged.count("C3"), 0u);  // the size-4 class is fine
}

TEST(KAnonymize, AdmissionsCensusFeedsRiskEngine) {
  // End to end: anonymize, take the census, evaluate the full-leak
  // single-target risk: (6/10)(1/3) + (4/10)(1/4) = 3/10.
  AnonymizedDataset result = KAnonymize(LoadAdmissionsFixture(), 3);
  ClassSizeDistribution census = ClassHistogram(result);
  Probability risk =
      MultiPatientRisk({census, census.Population(), 1}, Backend::kExact);
  EXPECT_EQ(risk.exact_value(), mpq_class(3, 10));
}

TEST(KAnonymize, GeneralizedCellsUseRuleLabels) {
  AnonymizedDataset result = KAnonymize(LoadAdmissionsFixture(), 3);
  // Header: pseudonym, class, then quasi-identifiers and sensitive columns.
  ASSERT_GE(result.columns.size(), 2u);
  EXPECT_EQ(result.columns[0], "pseudonym");
  EXPECT_EQ(result.columns[1], "class");
  ASSERT_EQ(result.qi_columns.size(), 5u);
  ASSERT_EQ(result.sensitive_columns.size(), 1u);
  EXPECT_EQ(result.sensitive_columns[0], "primary_diagnosis");

  // Locate the age and ethnicity cells and check their generalized form.
  size_t age_at = 0;
  size_t ethnicity_at = 0;
  for (size_t i = 0; i < result.qi_columns.size(); ++i) {
    if (result.qi_columns[i] == "age") age_at = i;
    if (result.qi_columns[i] == "ethnicity") ethnicity_at = i;
  }
  std::set<std::string> age_labels;
  for (const AnonymizedRecord& record : result.records) {
    age_labels.insert(record.cells[age_at]);
    EXPECT_EQ(record.cells[ethnicity_at], "*");
  }
  EXPECT_EQ(age_labels,
            (std::set<std::string>{"[48,56)", "[56,64)", "[64,72)"}));
}

TEST(KAnonymize, PseudonymsAreAPermutation) {
  Dataset dataset = LoadAdmissionsFixture();
  AnonymizedDataset result = KAnonymize(dataset, 3, UndersizedPolicy::kMerge,
                                        /*seed=*/99);
  std::set<int64_t> seen;
  for (const AnonymizedRecord& record : result.records) {
    seen.insert(record.pseudonym);
  }
  // Ten patients -> pseudonyms are exactly 1..10, no gaps, no reuse across
  // patients (records of one patient share one pseudonym).
  ASSERT_EQ(seen.size(), 10u);
  EXPECT_EQ(*seen.begin(), 1);
  EXPECT_EQ(*seen.rbegin(), 10);

  // Deterministic per seed, shuffled between seeds.
  AnonymizedDataset same = KAnonymize(dataset, 3, UndersizedPolicy::kMerge, 99);
  AnonymizedDataset other =
      KAnonymize(dataset, 3, UndersizedPolicy::kMerge, 100);
  bool any_difference = false;
  for (size_t i = 0; i < result.records.size(); ++i) {
    EXPECT_EQ(result.records[i].pseudonym, same.records[i].pseudonym);
    any_difference |=
        result.records[i].pseudonym != other.records[i].pseudonym;
  }
  EXPECT_TRUE(any_difference);
}

TEST(KAnonymize, MergePolicyBuildsResidualClass) {
  // Three patients share a bin; two loners do not. k = 2 pools the loners.
  const std::string csv =
      "id,name,age,town,note\n"
      "p1,a,50,AB,n1\n"
      "p2,b,51,AB,n2\n"
      "p3,c,52,AB,n3\n"
      "p4,d,70,ZZ,n4\n"
      "p5,e,90,QQ,n5\n";
  AnonymizedDataset result = KAnonymize(ToyDataset(csv), 2);
  EXPECT_EQ(result.audit.patients_total, 5);
  EXPECT_EQ(result.audit.patients_suppressed, 2);
  EXPECT_EQ(result.audit.patients_dropped, 0);
  EXPECT_EQ(result.audit.class_count, 2);
  ASSERT_TRUE(result.audit.residual_class_id.has_value());
  EXPECT_EQ(*result.audit.residual_class_id, "C0");
  EXPECT_TRUE(VerifyKAnonymity(result, 2).empty());

  // Residual records carry fully suppressed quasi-identifiers.
  for (const AnonymizedRecord& record : result.records) {
    if (record.class_id == "C0") {
      EXPECT_EQ(record.cells[0], "*");
      EXPECT_EQ(record.cells[1], "*");
    } else {
      EXPECT_EQ(record.class_id, "C1");
      EXPECT_EQ(record.cells[0], "[50,55)");
      EXPECT_EQ(record.cells[1], "AB");
    }
  }
}

TEST(KAnonymize, MergeEscalatesIntoValidClassesWhenPoolTooSmall) {
  // One valid triple and one loner; a pool of 1 cannot reach k = 3, so the
  // smallest valid class folds into the residual as well.
  const std::string csv =
      "id,name,age,town,note\n"
      "p1,a,50,AB,n1\n"
      "p2,b,51,AB,n2\n"
      "p3,c,52,AB,n3\n"
      "p4,d,90,QQ,n4\n";
  AnonymizedDataset result = KAnonymize(ToyDataset(csv), 3);
  EXPECT_EQ(result.audit.patients_suppressed, 4);
  EXPECT_EQ(result.audit.class_count, 1);
  ASSERT_TRUE(result.audit.residual_class_id.has_value());
  EXPECT_TRUE(VerifyKAnonymity(result, 3).empty());
  for (const AnonymizedRecord& record : result.records) {
    EXPECT_EQ(record.class_id, "C0");
  }
}

TEST(KAnonymize, DropPolicyRemovesUndersizedPatients) {
  const std::string csv =
      "id,name,age,town,note\n"
      "p1,a,50,AB,n1\n"
      "p2,b,51,AB,n2\n"
      "p3,c,52,AB,n3\n"
      "p4,d,70,ZZ,n4\n"
      "p5,e,90,QQ,n5\n";
  AnonymizedDataset result =
      KAnonymize(ToyDataset(csv), 2, UndersizedPolicy::kDrop);
  EXPECT_EQ(result.audit.patients_dropped, 2);
  EXPECT_EQ(result.audit.patients_suppressed, 0);
  EXPECT_EQ(result.audit.class_count, 1);
  EXPECT_FALSE(result.audit.residual_class_id.has_value());
  EXPECT_EQ(result.records.size(), 3u);
  for (const AnonymizedRecord& record : result.records) {
    EXPECT_EQ(record.class_id, "C1");
  }
  // Pseudonyms renumber the retained patients only.
  std::set<int64_t> seen;
  for (const AnonymizedRecord& record : result.records) {
    seen.insert(record.pseudonym);
  }
  EXPECT_EQ(seen, (std::set<int64_t>{1, 2, 3}));
}

TEST(KAnonymize, StrictPolicyRefusesUndersizedClasses) {
  const std::string csv =
      "id,name,age,town,note\n"
      "p1,a,50,AB,n1\n"
      "p2,b,51,AB,n2\n"
      "p3,c,90,QQ,n3\n";
  EXPECT_THROW(KAnonymize(ToyDataset(csv), 2, UndersizedPolicy::kStrict),
               DomainError);
  // The same dataset is fine under merge-with-escalation.
  AnonymizedDataset merged = KAnonymize(ToyDataset(csv), 2);
  EXPECT_TRUE(VerifyKAnonymity(merged, 2).empty());
}

TEST(KAnonymize, FewerPatientsThanKIsImpossibleUnderAnyPolicy) {
  const std::string csv =
      "id,name,age,town,note\n"
      "p1,a,50,AB,n1\n"
      "p2,b,51,AB,n2\n";
  for (UndersizedPolicy policy :
       {UndersizedPolicy::kMerge, UndersizedPolicy::kDrop,
        UndersizedPolicy::kStrict}) {
    EXPECT_THROW(KAnonymize(ToyDataset(csv), 3, policy), DomainError);
  }
  EXPECT_THROW(KAnonymize(ToyDataset(csv), 0), DomainError);
}

TEST(KAnonymize, KOneIsTheIdentityPartition) {
  const std::string csv =
      "id,name,age,town,note\n"
      "p1,a,50,AB,n1\n"
      "p2,b,70,ZZ,n2\n"
      "p3,c,90,QQ,n3\n";
  AnonymizedDataset result = KAnonymize(ToyDataset(csv), 1);
  EXPECT_EQ(result.audit.class_count, 3);
  EXPECT_EQ(result.audit.patients_suppressed, 0);
  EXPECT_TRUE(VerifyKAnonymity(result, 1).empty());
  ClassSizeDistribution census = ClassHistogram(result);
  EXPECT_EQ(census, ClassSizeDistribution({0, 3}));
}

TEST(KAnonymize, MultiRecordPatientsGroupByTupleSet) {
  // p1 and p2 both produce the same *set* of generalized tuples even though
  // their record counts differ; p3's set differs by one element.
  const std::string csv =
      "id,name,age,town,note\n"
      "p1,a,50,AB,n1\n"
      "p1,a,60,AB,n2\n"
      "p2,b,51,AB,n3\n"
      "p2,b,52,AB,n4\n"
      "p2,b,61,AB,n5\n"
      "p3,c,50,AB,n6\n";
  AnonymizedDataset result = KAnonymize(ToyDataset(csv), 1);
  // p1: {[50,55) AB, [60,65) AB}; p2 the same; p3 only {[50,55) AB}.
  EXPECT_EQ(result.audit.class_count, 2);
  ClassSizeDistribution census = ClassHistogram(result);
  EXPECT_EQ(census, ClassSizeDistribution({0, 1, 1}));
  EXPECT_TRUE(VerifyKAnonymity(result, 1).empty());
  std::vector<AnonymityViolation> violations = VerifyKAnonymity(result, 2);
  ASSERT_EQ(violations.size(), 1u);
  EXPECT_NE(violations[0].reason.find("only 1 patient(s)"), std::string::npos);
}

TEST(VerifyKAnonymity, DetectsTampering) {
  AnonymizedDataset result = KAnonymize(LoadAdmissionsFixture(), 3);
  ASSERT_TRUE(VerifyKAnonymity(result, 3).empty());

  // Corrupt one quasi-identifier cell: its class no longer agrees.
  AnonymizedDataset tampered = result;
  tampered.records[0].cells[0] = "[999,1000)";
  std::vector<AnonymityViolation> violations = VerifyKAnonymity(tampered, 3);
  ASSERT_FALSE(violations.empty());
  bool found_disagreement = false;
  for (const AnonymityViolation& v : violations) {
    found_disagreement |=
        v.reason.find("disagree on the generalized tuple set") !=
        std::string::npos;
  }
  EXPECT_TRUE(found_disagreement);

  // Move one record of a multi-record patient to another class.
  AnonymizedDataset split = result;
  split.records[0].class_id =
      split.records[0].class_id == "C1" ? "C2" : "C1";
  violations = VerifyKAnonymity(split, 3);
  bool found_split = false;
  for (const AnonymityViolation& v : violations) {
    found_split |=
        v.reason.find("appears in more than one class") != std::string::npos;
  }
  EXPECT_TRUE(found_split);
}

TEST(WriteAnonymized, EmitsHeaderAndOneLinePerRecord) {
  AnonymizedDataset result = KAnonymize(LoadAdmissionsFixture(), 3);
  std::string text = WriteAnonymized(result);
  std::istringstream lines(text);
  std::string header;
  ASSERT_TRUE(std::getline(lines, header));
  EXPECT_EQ(header.rfind("pseudonym,class,", 0), 0u);
  int64_t data_lines = 0;
  std::string line;
  while (std::getline(lines, line)) {
    if (!line.empty()) ++data_lines;
  }
  EXPECT_EQ(data_lines, 14);
}

TEST(ClassHistogram, CountsPatientsNotRecords) {
  const std::string csv =
      "id,name,age,town,note\n"
      "p1,a,50,AB,n1\n"
      "p1,a,50,AB,n2\n"
      "p1,a,50,AB,n3\n"
      "p2,b,51,AB,n4\n";
  AnonymizedDataset result = KAnonymize(ToyDataset(csv), 2);
  ClassSizeDistribution census = ClassHistogram(result);
  // Four records but two patients, one class of size 2.
  EXPECT_EQ(census, ClassSizeDistribution({0, 0, 1}));
}

}  // namespace
}  // namespace reident
