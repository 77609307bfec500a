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

#include <cstddef>

#include "sdp/core.hpp"

namespace sdp {

/// One Gaussian-mechanism invocation: privacy parameters, the L2 clip bound
/// that caps sensitivity, and the resulting noise standard deviation.
struct NoiseParams {
  double epsilon = 0.0;
  double delta = 0.0;
  double clip_norm = 0.0;
  double sigma = 0.0;
};

/// Empirical gradient-sensitivity estimate: the maximum observed ratio of
/// gradient change to dataset change over the examined adjacent pairs.
/// Diagnostic only; the privacy guarantee rests on clipping.
struct SensitivityEstimate {
  double value = 0.0;
  std::size_t pairs_examined = 0;
};

enum class SensitivityMode {
  kRemoveOne,   // adjacent dataset drops one row
  kReplaceOne,  // adjacent dataset swaps one row's content for another's
};

/// Rescale g onto the L2 ball of radius clip_norm; inputs already inside the
/// ball are returned unchanged, bit for bit.
Gradient clip(const Gradient& g, double clip_norm);

/// Standard Gaussian-mechanism calibration:
///   sigma = clip_norm * sqrt(2 ln(1.25/delta)) / epsilon.
/// Throws ConfigError for out-of-range epsilon/delta/clip_norm.
NoiseParams calibrate(double epsilon, double delta, double clip_norm);

/// g plus i.i.d. N(0, sigma^2) per coordinate. sigma == 0 returns g unchanged
/// and consumes no randomness.
Gradient add_noise(const Gradient& g, double sigma, SeededRng& rng);

/// Max over adjacent-dataset pairs of
///   ||grad(params, D1) - grad(params, D2)|| / ||D1 - D2||,
/// where the dataset distance is the L2 norm of the removed row's features
/// (remove-one) or of the feature difference (replace-one). Zero-distance
/// pairs are skipped. All pairs are enumerated when their count is at most
/// max_pairs; otherwise a uniform random subset of max_pairs is drawn.
SensitivityEstimate estimate_sensitivity(const ModelParams& params, const Dataset& dataset,
                                         SensitivityMode mode, SeededRng& rng,
                                         std::size_t max_pairs);

}  // namespace sdp
