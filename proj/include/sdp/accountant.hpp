// Copyright 2026 The SDP Simulator Authors
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

#pragma once

#include <cstdint>
#include <utility>

#include "sdp/core.hpp"

namespace sdp {

/// Raised when recording a spend would exceed the lifetime budget.
class BudgetExhaustedError : public std::runtime_error {
 public:
  BudgetExhaustedError(double requested, double remaining);

  double requested() const { return requested_; }
  double remaining() const { return remaining_; }

 private:
  double requested_;
  double remaining_;
};

/// Compensated (Neumaier) accumulator: value() is the correctly rounded sum
/// of everything added, to within 1 ulp.
struct CompensatedSum {
  double sum = 0.0;
  double compensation = 0.0;

  void add(double v);
  double value() const { return sum + compensation; }
};

/// Cumulative (epsilon, delta) spend under basic sequential composition.
/// Immutable in use: record() returns the extended ledger.
class BudgetLedger {
 public:
  BudgetLedger(double epsilon_total, double delta_total);

  /// Ledger with the round's spend added. Throws std::invalid_argument when
  /// eps_round <= 0 or delta_round < 0, BudgetExhaustedError when either
  /// total would be exceeded.
  BudgetLedger record(double eps_round, double delta_round) const;

  /// (epsilon remaining, delta remaining); both >= 0.
  std::pair<double, double> remaining() const;

  double epsilon_total() const { return epsilon_total_; }
  double delta_total() const { return delta_total_; }
  double epsilon_spent() const { return epsilon_spent_.value(); }
  double delta_spent() const { return delta_spent_.value(); }
  std::uint64_t rounds_recorded() const { return rounds_recorded_; }

 private:
  double epsilon_total_;
  double delta_total_;
  CompensatedSum epsilon_spent_;
  CompensatedSum delta_spent_;
  std::uint64_t rounds_recorded_ = 0;
};

}  // namespace sdp
