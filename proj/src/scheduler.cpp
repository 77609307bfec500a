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

#include "sdp/scheduler.hpp"

#include <algorithm>
#include <cmath>

namespace sdp {

namespace {

void check_decay_params(double gamma0, int tau, double floor) {
  if (!(gamma0 > 0.0)) throw ConfigError("schedule: gamma0 must be > 0");
  if (tau < 1) throw ConfigError("schedule: tau must be >= 1");
  if (!(floor >= 0.0 && floor <= gamma0))
    throw ConfigError("schedule: floor must be in [0, gamma0]");
}

}  // namespace

Schedule Schedule::constant(double gamma0) {
  if (!(gamma0 > 0.0)) throw ConfigError("schedule: gamma0 must be > 0");
  return Schedule{ScheduleKind::kConstant, gamma0, 1, 0.0};
}

Schedule Schedule::linear_decay(double gamma0, int tau, double floor) {
  check_decay_params(gamma0, tau, floor);
  return Schedule{ScheduleKind::kLinearDecay, gamma0, tau, floor};
}

Schedule Schedule::exponential_decay(double gamma0, int tau, double floor) {
  check_decay_params(gamma0, tau, floor);
  return Schedule{ScheduleKind::kExponentialDecay, gamma0, tau, floor};
}

double scale_at(const Schedule& s, int t) {
  if (t < 0) throw std::invalid_argument("scale_at: t must be >= 0");
  if (s.kind == ScheduleKind::kConstant) return s.gamma0;

  double frac = static_cast<double>(std::min(t, s.tau)) / static_cast<double>(s.tau);
  double scale;
  if (s.kind == ScheduleKind::kLinearDecay) {
    // floor + span*(1 - frac) rather than the textbook gamma0 - span*frac:
    // this form is monotone under rounding and lands exactly on floor at tau.
    scale = s.floor + (s.gamma0 - s.floor) * (1.0 - frac);
  } else {
    scale = s.floor > 0.0 ? s.gamma0 * std::pow(s.floor / s.gamma0, frac)
                          : (frac == 0.0 ? s.gamma0 : 0.0);
  }
  return std::clamp(scale, s.floor, s.gamma0);
}

double noise_at(const Schedule& s, double sigma0, int t) {
  if (!(sigma0 >= 0.0)) throw std::invalid_argument("noise_at: sigma0 must be >= 0");
  return scale_at(s, t) * sigma0;
}

}  // namespace sdp
