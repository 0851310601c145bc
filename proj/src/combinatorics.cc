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

#include "reident/combinatorics.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>

#include "reident/error.h"

namespace reident {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Largest class size served by the exact-factor ratio product. C(n, n/2)
// stays finite in double far beyond this, and the product path keeps the
// relative error at a few hundred ulp even at the cutoff.
constexpr int64_t kRatioPathMaxClassSize = 512;

// Pascal's triangle for n <= 64; every entry fits in uint64.
constexpr int kSmallMax = 64;

const std::array<std::array<uint64_t, kSmallMax + 1>, kSmallMax + 1>&
SmallBinomials() {
  static const auto* table = [] {
    auto* t =
        new std::array<std::array<uint64_t, kSmallMax + 1>, kSmallMax + 1>{};
    for (int n = 0; n <= kSmallMax; ++n) {
      (*t)[n][0] = 1;
      for (int r = 1; r <= n; ++r) {
        (*t)[n][r] = (*t)[n - 1][r - 1] + (r <= n - 1 ? (*t)[n - 1][r] : 0);
      }
    }
    return t;
  }();
  return *table;
}

void CheckPopulationArgs(int64_t class_size, int64_t population,
                         int64_t leak_size) {
  if (class_size < 0 || class_size > population) {
    throw DomainError("hypergeometric: class size " +
                      std::to_string(class_size) +
                      " outside [0, population=" + std::to_string(population) +
                      "]");
  }
  if (leak_size < 0 || leak_size > population) {
    throw DomainError("hypergeometric: leak size " +
                      std::to_string(leak_size) +
                      " outside [0, population=" + std::to_string(population) +
                      "]");
  }
}

bool OutsideSupport(int64_t class_size, int64_t population, int64_t leak_size,
                    int64_t hits) {
  return hits < 0 || hits > class_size || hits > leak_size ||
         leak_size - hits > population - class_size;
}

}  // namespace

mpz_class BinomialExact(int64_t n, int64_t r) {
  if (n < 0) {
    throw DomainError("binomial: n must be >= 0, got " + std::to_string(n));
  }
  if (r < 0 || r > n) {
    return 0;
  }
  mpz_class result;
  mpz_bin_uiui(result.get_mpz_t(), static_cast<unsigned long>(n),
               static_cast<unsigned long>(r));
  return result;
}

double BinomialReal(int64_t n, int64_t r) {
  if (n < 0) {
    throw DomainError("binomial: n must be >= 0, got " + std::to_string(n));
  }
  if (r < 0 || r > n) {
    return 0.0;
  }
  if (n <= kSmallMax) {
    return static_cast<double>(SmallBinomials()[n][r]);
  }
  return mpz_get_d(BinomialExact(n, r).get_mpz_t());
}

double BinomialLn(int64_t n, int64_t r) {
  if (n < 0) {
    throw DomainError("binomial: n must be >= 0, got " + std::to_string(n));
  }
  if (r < 0 || r > n) {
    return kNegInf;
  }
  if (r == 0 || r == n) {
    return 0.0;
  }
  if (r == 1 || r == n - 1) {
    return std::log(static_cast<double>(n));
  }
  return std::lgamma(static_cast<double>(n) + 1.0) -
         std::lgamma(static_cast<double>(r) + 1.0) -
         std::lgamma(static_cast<double>(n - r) + 1.0);
}

double LnOfMpz(const mpz_class& value) {
  if (value <= 0) {
    throw DomainError("LnOfMpz: value must be positive");
  }
  long exponent = 0;
  double mantissa = mpz_get_d_2exp(&exponent, value.get_mpz_t());
  return std::log(mantissa) + static_cast<double>(exponent) * M_LN2;
}

double LogSumExp(std::span<const double> log_terms) {
  double max_term = kNegInf;
  for (double x : log_terms) {
    max_term = std::max(max_term, x);
  }
  if (max_term == kNegInf) {
    return kNegInf;
  }
  if (std::isinf(max_term)) {
    return max_term;
  }
  CompensatedSum sum;
  for (double x : log_terms) {
    if (x != kNegInf) {
      sum.Add(std::exp(x - max_term));
    }
  }
  return max_term + std::log(sum.Total());
}

mpq_class HypergeomPmfExact(int64_t class_size, int64_t population,
                            int64_t leak_size, int64_t hits) {
  CheckPopulationArgs(class_size, population, leak_size);
  if (OutsideSupport(class_size, population, leak_size, hits)) {
    return mpq_class(0);
  }
  mpz_class numerator = BinomialExact(class_size, hits) *
                        BinomialExact(population - class_size,
                                      leak_size - hits);
  mpq_class result(numerator, BinomialExact(population, leak_size));
  result.canonicalize();
  return result;
}

double HypergeomPmfReal(int64_t class_size, int64_t population,
                        int64_t leak_size, int64_t hits) {
  CheckPopulationArgs(class_size, population, leak_size);
  if (OutsideSupport(class_size, population, leak_size, hits)) {
    return 0.0;
  }
  if (class_size <= kRatioPathMaxClassSize) {
    // C(D-k, L-h)/C(D, L) expands into two short products of integer-valued
    // factors; interleaving multiply and divide keeps the running value
    // near C(k, h), so nothing overflows and every factor is exact.
    double term = BinomialReal(class_size, hits);
    for (int64_t i = 0; i < hits; ++i) {
      term *= static_cast<double>(leak_size - i);
      term /= static_cast<double>(population - i);
    }
    for (int64_t i = 0; i < class_size - hits; ++i) {
      term *= static_cast<double>(population - leak_size - i);
      term /= static_cast<double>(population - hits - i);
    }
    return term;
  }
  return std::exp(BinomialLn(class_size, hits) +
                  BinomialLn(population - class_size, leak_size - hits) -
                  BinomialLn(population, leak_size));
}

}  // namespace reident
