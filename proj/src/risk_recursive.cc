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

#include "reident/risk_recursive.h"

#include <algorithm>
#include <cstddef>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "reident/combinatorics.h"
#include "reident/error.h"

namespace reident {
namespace {

// Census canonicalized for caching: a_0 never influences a result (it holds
// no patients and the update never reads it), so it is dropped along with
// leading and trailing zero runs; the first retained size keeps the
// alignment.
struct MemoKey {
  int64_t first_size = 0;
  int64_t leak_size = 0;
  int64_t targets = 0;
  std::vector<int64_t> counts;

  bool operator==(const MemoKey&) const = default;
};

struct MemoKeyHash {
  size_t operator()(const MemoKey& key) const {
    uint64_t h = 1469598103934665603ULL;  // FNV-1a
    auto mix = [&h](uint64_t v) {
      h ^= v;
      h *= 1099511628211ULL;
    };
    mix(static_cast<uint64_t>(key.first_size));
    mix(static_cast<uint64_t>(key.leak_size));
    mix(static_cast<uint64_t>(key.targets));
    for (int64_t c : key.counts) {
      mix(static_cast<uint64_t>(c));
    }
    return static_cast<size_t>(h);
  }
};

MemoKey CanonicalKey(const ClassSizeDistribution& classes, int64_t leak_size,
                     int64_t targets) {
  const auto& counts = classes.counts();
  size_t first = 1;
  while (first < counts.size() && counts[first] == 0) {
    ++first;
  }
  MemoKey key;
  key.leak_size = leak_size;
  key.targets = targets;
  if (first >= counts.size()) {
    return key;  // no classes
  }
  key.first_size = static_cast<int64_t>(first);
  key.counts.assign(counts.begin() + static_cast<ptrdiff_t>(first),
                    counts.end());
  return key;
}

void CheckState(const RecursionState& state) {
  const int64_t population = state.classes.Population();
  if (state.leak_size < 0 || state.leak_size > population) {
    throw DomainError("recursion: leak size " +
                      std::to_string(state.leak_size) + " outside [0, " +
                      std::to_string(population) + "]");
  }
  if (state.targets < 0) {
    throw DomainError("recursion: target count must be >= 0");
  }
  if (state.targets > state.leak_size) {
    throw DomainError("recursion: cannot identify " +
                      std::to_string(state.targets) +
                      " targets from a leak of " +
                      std::to_string(state.leak_size));
  }
}

// Backend policies. Values are linear-domain probabilities in both cases;
// the double flavor leans on HypergeomPmfReal, whose large-class path runs
// through logs.
struct ExactOps {
  using Value = mpq_class;
  static Value One() { return mpq_class(1); }
  static Value Ratio(int64_t num, int64_t den) {
    mpq_class v{mpz_class(num), mpz_class(den)};
    v.canonicalize();
    return v;
  }
  static Value Pmf(int64_t class_size, int64_t population, int64_t leak_size,
                   int64_t hits) {
    return HypergeomPmfExact(class_size, population, leak_size, hits);
  }
  static bool IsZero(const Value& v) { return sgn(v) == 0; }
  static Probability Wrap(Value v) { return Probability::Exact(std::move(v)); }

  struct Accumulator {
    mpq_class sum = 0;
    void Add(const Value& v) { sum += v; }
    Value Total() const { return sum; }
  };
};

struct LogOps {
  using Value = double;
  static Value One() { return 1.0; }
  static Value Ratio(int64_t num, int64_t den) {
    return static_cast<double>(num) / static_cast<double>(den);
  }
  static Value Pmf(int64_t class_size, int64_t population, int64_t leak_size,
                   int64_t hits) {
    return HypergeomPmfReal(class_size, population, leak_size, hits);
  }
  static bool IsZero(Value v) { return v == 0.0; }
  static Probability Wrap(Value v) { return Probability::Real(v); }

  struct Accumulator {
    CompensatedSum sum;
    void Add(Value v) { sum.Add(v); }
    Value Total() const { return sum.Total(); }
  };
};

template <typename Ops>
class SolverImpl {
 public:
  explicit SolverImpl(bool memoize) : memoize_(memoize) {}

  typename Ops::Value Solve(const ClassSizeDistribution& classes,
                            int64_t leak_size, int64_t targets) {
    if (targets == 0) {
      return Ops::One();
    }
    MemoKey key;
    if (memoize_) {
      key = CanonicalKey(classes, leak_size, targets);
      auto it = memo_.find(key);
      if (it != memo_.end()) {
        return it->second;
      }
    }
    const int64_t population = classes.Population();
    const auto& counts = classes.counts();
    typename Ops::Accumulator total;
    for (int64_t k = 1; k < static_cast<int64_t>(counts.size()); ++k) {
      if (counts[k] == 0) {
        continue;
      }
      // P(first target belongs to a size-k class): patients weight classes.
      const auto in_class = Ops::Ratio(k * counts[k], population);
      const auto leaked = Ops::Ratio(leak_size, population);
      const int64_t max_overlap = std::min(k - 1, leak_size - 1);
      ClassSizeDistribution next = ApplyIdentification(classes, k);
      for (int64_t overlap = 0; overlap <= max_overlap; ++overlap) {
        // Overlap among the k-1 classmates within the other L-1 leaked
        // histories of the remaining D-1 patients.
        const auto overlap_prob =
            Ops::Pmf(k - 1, population - 1, leak_size - 1, overlap);
        if (Ops::IsZero(overlap_prob)) {
          continue;
        }
        auto term = Ops::Ratio(1, overlap + 1);
        term = term * leaked * overlap_prob * in_class;
        total.Add(term * Solve(next, leak_size - 1, targets - 1));
      }
    }
    auto result = total.Total();
    if (memoize_) {
      memo_.emplace(std::move(key), result);
    }
    return result;
  }

  int64_t memo_entries() const { return static_cast<int64_t>(memo_.size()); }

 private:
  bool memoize_;
  std::unordered_map<MemoKey, typename Ops::Value, MemoKeyHash> memo_;
};

template <typename Ops>
std::vector<FirstPatientTerm> FirstPatientTermsImpl(
    const RecursionState& state) {
  const int64_t population = state.classes.Population();
  const auto& counts = state.classes.counts();
  std::vector<FirstPatientTerm> terms;
  for (int64_t k = 1; k < static_cast<int64_t>(counts.size()); ++k) {
    if (counts[k] == 0) {
      continue;
    }
    const auto in_class = Ops::Ratio(k * counts[k], population);
    const auto leaked = Ops::Ratio(state.leak_size, population);
    for (int64_t overlap = 0; overlap <= k - 1; ++overlap) {
      const auto overlap_prob =
          Ops::Pmf(k - 1, population - 1, state.leak_size - 1, overlap);
      auto value = Ops::Ratio(1, overlap + 1);
      value = value * leaked * overlap_prob * in_class;
      terms.push_back({k, overlap, Ops::Wrap(std::move(value))});
    }
  }
  return terms;
}

}  // namespace

std::vector<FirstPatientTerm> FirstPatientTerms(const RecursionState& state,
                                                Backend backend) {
  CheckState(state);
  const int64_t population = state.classes.Population();
  if (population < 1) {
    throw DomainError("recursion: population must be >= 1");
  }
  if (state.leak_size < 1) {
    throw DomainError("recursion: first-target terms need a leak of >= 1");
  }
  backend = ResolveBackend(backend, population);
  if (backend == Backend::kExact) {
    return FirstPatientTermsImpl<ExactOps>(state);
  }
  return FirstPatientTermsImpl<LogOps>(state);
}

ClassSizeDistribution ApplyIdentification(const ClassSizeDistribution& classes,
                                          int64_t class_size) {
  const auto& counts = classes.counts();
  if (class_size < 1 ||
      class_size >= static_cast<int64_t>(counts.size()) ||
      counts[class_size] == 0) {
    throw DomainError("no class of size " + std::to_string(class_size) +
                      " to identify a patient in");
  }
  std::vector<int64_t> next(counts);
  next[class_size] -= 1;
  next[class_size - 1] += 1;
  return ClassSizeDistribution(std::move(next));
}

class RecursiveSolver::Impl {
 public:
  Impl(Backend backend, bool memoize)
      : backend_(backend),
        exact_(memoize),
        real_(memoize) {}

  Probability Solve(const RecursionState& state) {
    CheckState(state);
    const Backend resolved =
        ResolveBackend(backend_, state.classes.Population());
    if (resolved == Backend::kExact) {
      return ExactOps::Wrap(
          exact_.Solve(state.classes, state.leak_size, state.targets));
    }
    return LogOps::Wrap(
        real_.Solve(state.classes, state.leak_size, state.targets));
  }

  int64_t memo_entries() const {
    return exact_.memo_entries() + real_.memo_entries();
  }

 private:
  Backend backend_;
  SolverImpl<ExactOps> exact_;
  SolverImpl<LogOps> real_;
};

RecursiveSolver::RecursiveSolver(Backend backend, bool memoize)
    : impl_(std::make_unique<Impl>(backend, memoize)) {}

RecursiveSolver::~RecursiveSolver() = default;
RecursiveSolver::RecursiveSolver(RecursiveSolver&&) noexcept = default;
RecursiveSolver& RecursiveSolver::operator=(RecursiveSolver&&) noexcept =
    default;

Probability RecursiveSolver::Solve(const RecursionState& state) {
  return impl_->Solve(state);
}

int64_t RecursiveSolver::memo_entries() const { return impl_->memo_entries(); }

Probability MultiPatientRisk(const RecursionState& state, Backend backend) {
  RecursiveSolver solver(backend);
  return solver.Solve(state);
}

}  // namespace reident
