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

#include "sdp/accountant.hpp"

#include <cmath>
#include <vector>

#include "doctest.h"

using namespace sdp;

TEST_CASE("compensated sums round correctly") {
  CompensatedSum sum;
  for (int i = 0; i < 10; ++i) sum.add(0.05);
  CHECK(sum.value() == 0.5);

  CompensatedSum alt;
  for (int i = 0; i < 10; ++i) alt.add(0.1);
  CHECK(alt.value() == 1.0);
}

TEST_CASE("ten spends of 0.05 land exactly on a 0.5 budget; the eleventh is rejected") {
  BudgetLedger ledger(0.5, 1e-2);
  for (int i = 0; i < 10; ++i) ledger = ledger.record(0.05, 1e-5);
  CHECK(ledger.epsilon_spent() == 0.5);
  CHECK(ledger.rounds_recorded() == 10);
  CHECK(ledger.remaining().first == 0.0);
  try {
    ledger.record(0.05, 1e-5);
    FAIL("expected BudgetExhaustedError");
  } catch (const BudgetExhaustedError& e) {
    CHECK(e.requested() == 0.05);
    CHECK(e.remaining() == 0.0);
  }
}

TEST_CASE("zero or negative per-round spends violate the precondition") {
  BudgetLedger ledger(0.5, 1e-4);
  CHECK_THROWS_AS(ledger.record(0.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(ledger.record(-0.1, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(ledger.record(0.1, -1e-9), std::invalid_argument);
}

TEST_CASE("a single full-budget spend is accepted with nothing left") {
  BudgetLedger ledger(0.5, 1e-4);
  ledger = ledger.record(0.5, 1e-5);
  CHECK(ledger.rounds_recorded() == 1);
  CHECK(ledger.remaining().first == 0.0);
  CHECK_THROWS_AS(ledger.record(1e-9, 0.0), BudgetExhaustedError);
}

TEST_CASE("remaining tracks subtraction") {
  BudgetLedger fresh(0.5, 1e-4);
  CHECK(fresh.remaining() == std::pair<double, double>{0.5, 1e-4});

  BudgetLedger after = fresh.record(0.1, 1e-5);
  CHECK(after.remaining().first == 0.4);
  CHECK(after.remaining().second == doctest::Approx(9e-5).epsilon(1e-12));
}

TEST_CASE("spent plus remaining reproduces the totals to 1 ulp") {
  SeededRng rng(33);
  for (int trial = 0; trial < 50; ++trial) {
    double total = 0.5 + 4.0 * rng.uniform01();
    BudgetLedger ledger(total, 0.5);
    for (int i = 0; i < 12; ++i) {
      double eps = total / 64.0 * (0.5 + rng.uniform01());
      try {
        ledger = ledger.record(eps, 1e-6);
      } catch (const BudgetExhaustedError&) {
        break;
      }
      double recovered = ledger.remaining().first + ledger.epsilon_spent();
      CHECK(std::fabs(recovered - total) <=
            std::ldexp(1.0, std::ilogb(total) - 52));
    }
  }
}

TEST_CASE("spend totals are order-independent") {
  std::vector<double> spends = {0.07, 0.013, 0.22, 0.0041, 0.11, 0.033};
  BudgetLedger forward(1.0, 0.5);
  for (double e : spends) forward = forward.record(e, 0.0);
  BudgetLedger backward(1.0, 0.5);
  for (auto it = spends.rbegin(); it != spends.rend(); ++it)
    backward = backward.record(*it, 0.0);
  CHECK(forward.epsilon_spent() == backward.epsilon_spent());
}

TEST_CASE("delta exhaustion is enforced independently") {
  BudgetLedger ledger(10.0, 1e-4);
  for (int i = 0; i < 10; ++i) ledger = ledger.record(0.1, 1e-5 * 0.5);
  CHECK_THROWS_AS(ledger.record(0.1, 1e-4), BudgetExhaustedError);
}

TEST_CASE("the accepted-round count is floor(total/per-round)") {
  auto count_accepted = [](double total, double per_round) {
    BudgetLedger ledger(total, 0.5);
    int accepted = 0;
    for (;;) {
      try {
        ledger = ledger.record(per_round, 0.0);
      } catch (const BudgetExhaustedError&) {
        return accepted;
      }
      ++accepted;
    }
  };
  CHECK(count_accepted(0.5, 0.12) == 4);    // floor(4.1667)
  CHECK(count_accepted(0.5, 0.05) == 10);   // exact division
  CHECK(count_accepted(1.0, 0.25) == 4);
  CHECK(count_accepted(0.1, 0.3) == 0);
}

TEST_CASE("ledger construction validates totals") {
  CHECK_THROWS_AS(BudgetLedger(0.0, 1e-4), ConfigError);
  CHECK_THROWS_AS(BudgetLedger(0.5, 0.0), ConfigError);
  CHECK_THROWS_AS(BudgetLedger(0.5, 1.0), ConfigError);
}
