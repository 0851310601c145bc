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

#include "reident/risk_analytic.h"

#include <cmath>
#include <string>
#include <vector>

#include "reident/combinatorics.h"
#include "reident/error.h"

namespace reident {
namespace {

// Class sizes up to here use the exact-factor product; beyond, the
// log-domain sum takes over (max-shifted, compensated).
constexpr int64_t kRatioTermMaxClassSize = 512;

int64_t RequireUniformClassSize(const AttackScenario& scenario) {
  if (!scenario.IsUniform()) {
    throw DomainError(
        "single-target risk needs homogeneous classes; use the recursive "
        "solver for a mixed census");
  }
  return scenario.UniformClassSize();
}

// One addend of the overlap sum with the leading 1/k folded in:
//
//   (C(k,h)/k) * prod_{i<h} (L-i)/(D-i) * prod_{i<k-h} (D-L-i)/(D-h-i)
//
// The folded form makes the endpoints land on exact doubles: at L=D only
// h=k survives with value (1/k)*1, at L=1 only h=1 survives with value
// 1*(1/D), and k=1 reduces to L/D.
double OverlapTermReal(int64_t k, int64_t population, int64_t leak_size,
                       int64_t h) {
  double term = BinomialReal(k, h) / static_cast<double>(k);
  // Each factor is formed as a ratio before multiplying so that a ratio of
  // equal integers contributes exactly 1.0; this is what pins the endpoint
  // identities (L=D, L=1, k=1) onto exact doubles.
  for (int64_t i = 0; i < h; ++i) {
    term *= static_cast<double>(leak_size - i) /
            static_cast<double>(population - i);
  }
  for (int64_t i = 0; i < k - h; ++i) {
    term *= static_cast<double>(population - leak_size - i) /
            static_cast<double>(population - h - i);
  }
  return term;
}

Probability SingleRiskReal(int64_t k, int64_t population, int64_t leak_size) {
  if (k <= kRatioTermMaxClassSize) {
    CompensatedSum sum;
    for (int64_t h = 1; h <= k && h <= leak_size; ++h) {
      if (leak_size - h > population - k) {
        continue;
      }
      sum.Add(OverlapTermReal(k, population, leak_size, h));
    }
    return Probability::Real(sum.Total());
  }
  std::vector<double> log_terms;
  log_terms.reserve(static_cast<size_t>(k));
  for (int64_t h = 1; h <= k; ++h) {
    log_terms.push_back(BinomialLn(k, h) +
                        BinomialLn(population - k, leak_size - h) -
                        BinomialLn(population, leak_size));
  }
  return Probability::Real(std::exp(LogSumExp(log_terms)) /
                           static_cast<double>(k));
}

Probability SingleRiskExact(int64_t k, int64_t population, int64_t leak_size) {
  mpq_class sum = 0;
  for (int64_t h = 1; h <= k; ++h) {
    sum += HypergeomPmfExact(k, population, leak_size, h);
  }
  sum /= k;
  return Probability::Exact(sum);
}

}  // namespace

Probability SingleRisk(const AttackScenario& scenario, Backend backend) {
  const int64_t k = RequireUniformClassSize(scenario);
  backend = ResolveBackend(backend, scenario.population());
  if (backend == Backend::kExact) {
    return SingleRiskExact(k, scenario.population(), scenario.leak_size());
  }
  return SingleRiskReal(k, scenario.population(), scenario.leak_size());
}

Probability SingleRiskClosed(const AttackScenario& scenario, Backend backend) {
  const int64_t k = RequireUniformClassSize(scenario);
  const int64_t population = scenario.population();
  const int64_t leak_size = scenario.leak_size();
  backend = ResolveBackend(backend, population);
  if (backend == Backend::kExact) {
    // 1 - C(D-L, k)/C(D, k) written as a running rational product.
    mpq_class missed = 1;
    for (int64_t i = 0; i < k; ++i) {
      if (population - leak_size - i <= 0) {
        missed = 0;
        break;
      }
      mpq_class ratio(mpz_class(population - leak_size - i),
                      mpz_class(population - i));
      ratio.canonicalize();
      missed *= ratio;
    }
    mpq_class risk = (1 - missed) / k;
    return Probability::Exact(risk);
  }
  double missed = 1.0;
  for (int64_t i = 0; i < k; ++i) {
    if (population - leak_size - i <= 0) {
      missed = 0.0;
      break;
    }
    missed *= static_cast<double>(population - leak_size - i);
    missed /= static_cast<double>(population - i);
  }
  return Probability::Real((1.0 - missed) / static_cast<double>(k));
}

std::vector<SweepPoint> RiskSweep(int64_t population,
                                  std::span<const int64_t> class_sizes,
                                  std::span<const int64_t> leak_sizes,
                                  Backend backend) {
  std::vector<SweepPoint> points;
  points.reserve(class_sizes.size() * leak_sizes.size());
  for (int64_t k : class_sizes) {
    for (int64_t leak : leak_sizes) {
      try {
        AttackScenario scenario = AttackScenario::Uniform(population, leak, k);
        points.push_back({k, leak, SingleRisk(scenario, backend)});
      } catch (const DomainError& e) {
        throw DomainError("sweep point k=" + std::to_string(k) +
                          ", L=" + std::to_string(leak) + ": " + e.what());
      }
    }
  }
  return points;
}

}  // namespace reident
