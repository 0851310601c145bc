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

#ifndef REIDENT_SCENARIO_H_
#define REIDENT_SCENARIO_H_

#include <cstdint>
#include <vector>

namespace reident {

// Census of equivalence-class sizes: counts()[i] is the number of classes
// holding exactly i patients. Index 0 is tolerated but carries no weight.
class ClassSizeDistribution {
 public:
  ClassSizeDistribution() = default;

  // Throws DomainError on negative counts. Trailing zero counts are
  // normalized away so equal censuses compare equal.
  explicit ClassSizeDistribution(std::vector<int64_t> counts);

  // population / class_size identical classes; class_size must divide
  // population exactly.
  static ClassSizeDistribution Homogeneous(int64_t population,
                                           int64_t class_size);

  // Total patients, sum_i i * counts[i].
  int64_t Population() const;
  // Number of nonempty classes.
  int64_t ClassCount() const;
  // Largest class size present; 0 when there are no classes.
  int64_t MaxClassSize() const;
  // True when every class has the same size (or there are no classes).
  bool IsHomogeneous() const;

  const std::vector<int64_t>& counts() const { return counts_; }

  friend bool operator==(const ClassSizeDistribution&,
                         const ClassSizeDistribution&) = default;

 private:
  std::vector<int64_t> counts_;
};

// A leak of leak_size whole patient histories drawn uniformly from a
// population partitioned into equivalence classes.
class AttackScenario {
 public:
  // Throws DomainError unless 1 <= leak_size <= population and the census
  // is nonempty.
  static AttackScenario Create(int64_t leak_size,
                               ClassSizeDistribution classes);
  static AttackScenario Uniform(int64_t population, int64_t leak_size,
                                int64_t class_size);

  int64_t population() const { return population_; }
  int64_t leak_size() const { return leak_size_; }
  const ClassSizeDistribution& classes() const { return classes_; }

  bool IsUniform() const { return classes_.IsHomogeneous(); }
  // Common class size; throws DomainError when classes are heterogeneous.
  int64_t UniformClassSize() const;

 private:
  AttackScenario(int64_t population, int64_t leak_size,
                 ClassSizeDistribution classes);

  int64_t population_ = 0;
  int64_t leak_size_ = 0;
  ClassSizeDistribution classes_;
};

}  // namespace reident

#endif  // REIDENT_SCENARIO_H_
