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

#include <algorithm>
#include <cmath>
#include <sstream>

namespace sdp {

BudgetExhaustedError::BudgetExhaustedError(double requested, double remaining)
    : std::runtime_error([&] {
        std::ostringstream msg;
        msg << "privacy budget exhausted: requested " << requested << ", remaining "
            << remaining;
        return msg.str();
      }()),
      requested_(requested),
      remaining_(remaining) {}

void CompensatedSum::add(double v) {
  double t = sum + v;
  if (std::fabs(sum) >= std::fabs(v)) {
    compensation += (sum - t) + v;
  } else {
    compensation += (v - t) + sum;
  }
  sum = t;
}

BudgetLedger::BudgetLedger(double epsilon_total, double delta_total)
    : epsilon_total_(epsilon_total), delta_total_(delta_total) {
  if (!(epsilon_total > 0.0)) throw ConfigError("ledger: epsilon_total must be > 0");
  if (!(delta_total > 0.0 && delta_total < 1.0))
    throw ConfigError("ledger: delta_total must be in (0, 1)");
}

BudgetLedger BudgetLedger::record(double eps_round, double delta_round) const {
  if (!(eps_round > 0.0))
    throw std::invalid_argument("ledger: per-round epsilon must be > 0");
  if (!(delta_round >= 0.0))
    throw std::invalid_argument("ledger: per-round delta must be >= 0");

  BudgetLedger next = *this;
  next.epsilon_spent_.add(eps_round);
  next.delta_spent_.add(delta_round);
  if (next.epsilon_spent() > epsilon_total_)
    throw BudgetExhaustedError(eps_round, remaining().first);
  if (next.delta_spent() > delta_total_)
    throw BudgetExhaustedError(delta_round, remaining().second);
  ++next.rounds_recorded_;
  return next;
}

std::pair<double, double> BudgetLedger::remaining() const {
  double eps = std::max(0.0, epsilon_total_ - epsilon_spent());
  double del = std::max(0.0, delta_total_ - delta_spent());
  return {eps, del};
}

}  // namespace sdp
