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

#include "reident/probability.h"

#include <gmpxx.h>
#include <gtest/gtest.h>

#include <cmath>
#include <string>

#include "reident/error.h"

namespace reident {
namespace {

TEST(ProbabilityExact, CarriesCanonicalRational) {
  mpq_class five_twelfths{mpz_class(10), mpz_class(24)};
  five_twelfths.canonicalize();
  Probability p = Probability::Exact(five_twelfths);
  EXPECT_TRUE(p.is_exact());
  EXPECT_EQ(p.backend(), Backend::kExact);
  EXPECT_EQ(p.RatioString(), "5/12");
  EXPECT_EQ(p.exact_value(), mpq_class(5, 12));
  EXPECT_DOUBLE_EQ(p.value(), 5.0 / 12.0);
  EXPECT_NEAR(p.log_value(), std::log(5.0 / 12.0), 1e-15);
}

TEST(ProbabilityExact, CanonicalizesUnreducedInput) {
  // mpq_class never canonicalizes on its own; the factory must.
  mpq_class unreduced;
  mpq_set_si(unreduced.get_mpq_t(), 10, 24);  // deliberately left unreduced
  Probability p = Probability::Exact(unreduced);
  EXPECT_EQ(p.RatioString(), "5/12");
}

TEST(ProbabilityExact, EndpointsAndErrors) {
  EXPECT_EQ(Probability::Exact(mpq_class(0)).RatioString(), "0");
  EXPECT_EQ(Probability::Exact(mpq_class(1)).RatioString(), "1");
  EXPECT_THROW(Probability::Exact(mpq_class(-1, 10)), DomainError);
  EXPECT_THROW(Probability::Exact(mpq_class(11, 10)), DomainError);
}

TEST(ProbabilityExact, LogOfZeroIsNegInf) {
  Probability zero = Probability::Exact(mpq_class(0));
  EXPECT_TRUE(std::isinf(zero.log_value()));
  EXPECT_LT(zero.log_value(), 0.0);
  EXPECT_EQ(zero.value(), 0.0);
}

TEST(ProbabilityReal, RoundTripsValue) {
  Probability p = Probability::Real(0.25);
  EXPECT_FALSE(p.is_exact());
  EXPECT_EQ(p.backend(), Backend::kLog);
  EXPECT_DOUBLE_EQ(p.value(), 0.25);
  EXPECT_DOUBLE_EQ(p.log_value(), std::log(0.25));
}

TEST(ProbabilityReal, ClampsFloatNoiseOntoBoundaries) {
  // Accumulated rounding that lands a hair outside [0, 1] is not a domain
  // error; it is pinned to the boundary instead.
  EXPECT_EQ(Probability::Real(1.0 + 1e-12).value(), 1.0);
  EXPECT_EQ(Probability::Real(-1e-12).value(), 0.0);
  EXPECT_THROW(Probability::Real(1.1), DomainError);
  EXPECT_THROW(Probability::Real(-0.1), DomainError);
  EXPECT_THROW(Probability::Real(std::nan("")), DomainError);
}

TEST(ProbabilityReal, ExactViewUnavailable) {
  EXPECT_THROW(Probability::Real(0.5).exact_value(), std::logic_error);
}

TEST(ProbabilityDefault, IsZeroOnDoubleBackend) {
  Probability p;
  EXPECT_FALSE(p.is_exact());
  EXPECT_EQ(p.value(), 0.0);
}

TEST(ResolveBackend, ExplicitChoicesPassThrough) {
  EXPECT_EQ(ResolveBackend(Backend::kExact, 1000000), Backend::kExact);
  EXPECT_EQ(ResolveBackend(Backend::kLog, 4), Backend::kLog);
}

TEST(ResolveBackend, AutoSwitchesAtThreshold) {
  EXPECT_EQ(ResolveBackend(Backend::kAuto, kExactAutoMaxPopulation),
            Backend::kExact);
  EXPECT_EQ(ResolveBackend(Backend::kAuto, kExactAutoMaxPopulation + 1),
            Backend::kLog);
  EXPECT_EQ(ResolveBackend(Backend::kAuto, 1), Backend::kExact);
}

TEST(BackendName, CliSpellings) {
  EXPECT_STREQ(BackendName(Backend::kAuto), "auto");
  EXPECT_STREQ(BackendName(Backend::kExact), "exact");
  EXPECT_STREQ(BackendName(Backend::kLog), "log");
}

}  // namespace
}  // namespace reident
