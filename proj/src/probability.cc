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

#include <cmath>
#include <limits>
#include <stdexcept>

#include "reident/combinatorics.h"
#include "reident/error.h"

namespace reident {
namespace {

// Accumulated float error tolerated (and clamped) at the [0, 1] edges.
constexpr double kEdgeSlack = 1e-9;

}  // namespace

Backend ResolveBackend(Backend requested, int64_t population) {
  if (requested != Backend::kAuto) {
    return requested;
  }
  return population <= kExactAutoMaxPopulation ? Backend::kExact
                                               : Backend::kLog;
}

const char* BackendName(Backend backend) {
  switch (backend) {
    case Backend::kAuto:
      return "auto";
    case Backend::kExact:
      return "exact";
    case Backend::kLog:
      return "log";
  }
  return "unknown";
}

Probability Probability::Exact(mpq_class value) {
  value.canonicalize();
  if (value < 0 || value > 1) {
    throw DomainError("probability outside [0, 1]: " + value.get_str());
  }
  Probability p;
  p.backend_ = Backend::kExact;
  p.exact_ = std::move(value);
  p.real_ = mpq_get_d(p.exact_.get_mpq_t());
  return p;
}

Probability Probability::Real(double value) {
  if (!(value >= -kEdgeSlack && value <= 1.0 + kEdgeSlack)) {
    throw DomainError("probability outside [0, 1]: " + std::to_string(value));
  }
  Probability p;
  p.backend_ = Backend::kLog;
  p.real_ = std::min(1.0, std::max(0.0, value));
  return p;
}

double Probability::value() const { return real_; }

double Probability::log_value() const {
  if (backend_ == Backend::kExact) {
    if (exact_ == 0) {
      return -std::numeric_limits<double>::infinity();
    }
    return LnOfMpz(mpz_class(exact_.get_num())) -
           LnOfMpz(mpz_class(exact_.get_den()));
  }
  return std::log(real_);
}

const mpq_class& Probability::exact_value() const {
  if (backend_ != Backend::kExact) {
    throw std::logic_error("exact_value() on a double-backend probability");
  }
  return exact_;
}

std::string Probability::RatioString() const {
  return exact_value().get_str();
}

}  // namespace reident
