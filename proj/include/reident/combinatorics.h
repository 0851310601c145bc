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
// Counting primitives shared by every risk computation. Two parallel
// families exist: exact arbitrary-precision rationals (GMP) and double
// precision backed by log-domain helpers where magnitudes would overflow.

#ifndef REIDENT_COMBINATORICS_H_
#define REIDENT_COMBINATORICS_H_

#include <gmpxx.h>

#include <cmath>
#include <cstdint>
#include <span>

namespace reident {

// C(n, r), exactly. Out-of-range r (r < 0 or r > n) yields 0 so that
// vanishing hypergeometric terms fall out of sums without special-casing.
// n must be >= 0.
mpz_class BinomialExact(int64_t n, int64_t r);

// C(n, r) rounded to double; +inf if it exceeds the double range.
double BinomialReal(int64_t n, int64_t r);

// ln C(n, r); -inf outside the support. Accurate to ~1e-13 relative on the
// log value, far inside the 1e-12 contract.
double BinomialLn(int64_t n, int64_t r);

// Natural log of a positive big integer via mantissa/exponent split.
// Absolute error stays near 1e-12 even for values with thousands of bits.
double LnOfMpz(const mpz_class& value);

// Neumaier-compensated accumulation; robust when terms span magnitudes.
class CompensatedSum {
 public:
  void Add(double x) {
    double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      carry_ += (sum_ - t) + x;
    } else {
      carry_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double Total() const { return sum_ + carry_; }

 private:
  double sum_ = 0.0;
  double carry_ = 0.0;
};

// log(sum_i exp(log_terms[i])) with the max shifted out and the residual
// exponentials accumulated with compensation. Empty or all -inf input
// yields -inf.
double LogSumExp(std::span<const double> log_terms);

// Probability that a class of `class_size` marked patients contributes
// exactly `hits` members to a uniformly drawn leak of `leak_size` patients
// out of `population`:
//
//   C(class_size, hits) * C(population - class_size, leak_size - hits)
//   ------------------------------------------------------------------
//                     C(population, leak_size)
//
// Zero outside the support. Requires 0 <= class_size <= population and
// 0 <= leak_size <= population.
mpq_class HypergeomPmfExact(int64_t class_size, int64_t population,
                            int64_t leak_size, int64_t hits);

// Same mass function in double precision. For moderate class sizes the
// value is built as an interleaved product of exact integer factors
// (relative error a few ulp); very large classes fall back to the
// log-domain route.
double HypergeomPmfReal(int64_t class_size, int64_t population,
                        int64_t leak_size, int64_t hits);

}  // namespace reident

#endif  // REIDENT_COMBINATORICS_H_
