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

#include "sdp/core.hpp"

namespace sdp {

enum class ScheduleKind {
  kConstant,
  kLinearDecay,
  kExponentialDecay,
};

/// Time-indexed noise scale. Decay kinds fall from gamma0 at t = 0 to floor
/// at t = tau (measured in epochs) and stay there; constant ignores tau and
/// floor. Build through the factories, which validate ranges.
struct Schedule {
  ScheduleKind kind = ScheduleKind::kConstant;
  double gamma0 = 1.0;
  int tau = 1;
  double floor = 0.0;

  static Schedule constant(double gamma0);
  static Schedule linear_decay(double gamma0, int tau, double floor);
  static Schedule exponential_decay(double gamma0, int tau, double floor);
};

/// Scaling factor at epoch t. Nonincreasing in t for the decay kinds, always
/// within [floor, gamma0], and exactly equal to scale_at(s, tau) for t >= tau.
double scale_at(const Schedule& s, int t);

/// Noise level at epoch t: scale_at(s, t) * sigma0.
double noise_at(const Schedule& s, double sigma0, int t);

}  // namespace sdp
