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

#include "reident/scenario.h"

#include <string>
#include <utility>

#include "reident/error.h"

namespace reident {

ClassSizeDistribution::ClassSizeDistribution(std::vector<int64_t> counts)
    : counts_(std::move(counts)) {
  for (size_t i = 0; i < counts_.size(); ++i) {
    if (counts_[i] < 0) {
      throw DomainError("class census: negative count " +
                        std::to_string(counts_[i]) + " at size " +
                        std::to_string(i));
    }
  }
  while (!counts_.empty() && counts_.back() == 0) {
    counts_.pop_back();
  }
}

ClassSizeDistribution ClassSizeDistribution::Homogeneous(int64_t population,
                                                         int64_t class_size) {
  if (population < 1 || class_size < 1) {
    throw DomainError("homogeneous census needs population >= 1 and class "
                      "size >= 1");
  }
  if (population % class_size != 0) {
    throw DomainError("class size " + std::to_string(class_size) +
                      " does not divide population " +
                      std::to_string(population));
  }
  std::vector<int64_t> counts(class_size + 1, 0);
  counts[class_size] = population / class_size;
  return ClassSizeDistribution(std::move(counts));
}

int64_t ClassSizeDistribution::Population() const {
  int64_t total = 0;
  for (size_t i = 1; i < counts_.size(); ++i) {
    total += static_cast<int64_t>(i) * counts_[i];
  }
  return total;
}

int64_t ClassSizeDistribution::ClassCount() const {
  int64_t total = 0;
  for (size_t i = 1; i < counts_.size(); ++i) {
    total += counts_[i];
  }
  return total;
}

int64_t ClassSizeDistribution::MaxClassSize() const {
  for (size_t i = counts_.size(); i-- > 1;) {
    if (counts_[i] > 0) {
      return static_cast<int64_t>(i);
    }
  }
  return 0;
}

bool ClassSizeDistribution::IsHomogeneous() const {
  int64_t sizes_seen = 0;
  for (size_t i = 1; i < counts_.size(); ++i) {
    if (counts_[i] > 0) {
      ++sizes_seen;
    }
  }
  return sizes_seen <= 1;
}

AttackScenario::AttackScenario(int64_t population, int64_t leak_size,
                               ClassSizeDistribution classes)
    : population_(population),
      leak_size_(leak_size),
      classes_(std::move(classes)) {}

AttackScenario AttackScenario::Create(int64_t leak_size,
                                      ClassSizeDistribution classes) {
  const int64_t population = classes.Population();
  if (population < 1) {
    throw DomainError("scenario: population must be >= 1");
  }
  if (leak_size < 1 || leak_size > population) {
    throw DomainError("scenario: leak size " + std::to_string(leak_size) +
                      " outside [1, population=" + std::to_string(population) +
                      "]");
  }
  return AttackScenario(population, leak_size, std::move(classes));
}

AttackScenario AttackScenario::Uniform(int64_t population, int64_t leak_size,
                                       int64_t class_size) {
  return Create(leak_size,
                ClassSizeDistribution::Homogeneous(population, class_size));
}

int64_t AttackScenario::UniformClassSize() const {
  if (!IsUniform()) {
    throw DomainError("scenario: classes are heterogeneous");
  }
  return classes_.MaxClassSize();
}

}  // namespace reident
