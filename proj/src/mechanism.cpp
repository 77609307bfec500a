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

#include "sdp/mechanism.hpp"

#include <cmath>

namespace sdp {

Gradient clip(const Gradient& g, double clip_norm) {
  if (!(clip_norm > 0.0)) throw std::invalid_argument("clip: clip_norm must be > 0");
  double norm = l2_norm(g);
  if (norm <= clip_norm) return g;
  double scale = clip_norm / norm;
  Gradient out = g;
  for (auto& v : out.values) v *= scale;
  return out;
}

NoiseParams calibrate(double epsilon, double delta, double clip_norm) {
  if (!(epsilon > 0.0)) throw ConfigError("calibrate: epsilon must be > 0");
  if (!(delta > 0.0 && delta < 1.0)) throw ConfigError("calibrate: delta must be in (0, 1)");
  if (!(clip_norm > 0.0)) throw ConfigError("calibrate: clip_norm must be > 0");
  NoiseParams params;
  params.epsilon = epsilon;
  params.delta = delta;
  params.clip_norm = clip_norm;
  params.sigma = clip_norm * std::sqrt(2.0 * std::log(1.25 / delta)) / epsilon;
  return params;
}

Gradient add_noise(const Gradient& g, double sigma, SeededRng& rng) {
  if (!(sigma >= 0.0)) throw std::invalid_argument("add_noise: sigma must be >= 0");
  if (sigma == 0.0) return g;
  Gradient out = g;
  for (auto& v : out.values) v += sigma * rng.normal();
  return out;
}

namespace {

// Adjacent-dataset pair, identified by the row touched and (for replace-one)
// the row whose content replaces it.
struct Pair {
  std::size_t removed;
  std::size_t replacement;  // unused for remove-one
};

Pair pair_at(SensitivityMode mode, std::size_t n, std::size_t p) {
  if (mode == SensitivityMode::kRemoveOne) return {p, 0};
  std::size_t i = p / (n - 1);
  std::size_t j = p % (n - 1);
  if (j >= i) ++j;
  return {i, j};
}

double feature_distance(const Row& a) {
  double sum = 0.0;
  for (double v : a.features) sum += v * v;
  return std::sqrt(sum);
}

double feature_distance(const Row& a, const Row& b) {
  double sum = 0.0;
  for (std::size_t j = 0; j < a.features.size(); ++j) {
    double diff = a.features[j] - b.features[j];
    sum += diff * diff;
  }
  return std::sqrt(sum);
}

}  // namespace

SensitivityEstimate estimate_sensitivity(const ModelParams& params, const Dataset& dataset,
                                         SensitivityMode mode, SeededRng& rng,
                                         std::size_t max_pairs) {
  if (dataset.size() < 2)
    throw std::invalid_argument("estimate_sensitivity: dataset needs at least 2 rows");
  if (max_pairs < 1)
    throw std::invalid_argument("estimate_sensitivity: max_pairs must be >= 1");

  const std::size_t n = dataset.size();
  const std::size_t total_pairs =
      mode == SensitivityMode::kRemoveOne ? n : n * (n - 1);

  std::vector<std::size_t> chosen;
  if (total_pairs <= max_pairs) {
    chosen.resize(total_pairs);
    for (std::size_t p = 0; p < total_pairs; ++p) chosen[p] = p;
  } else {
    chosen = sample_batch_indices(total_pairs, max_pairs, rng);
  }

  const Gradient base = logistic_gradient(params, dataset);

  double best = 0.0;
  for (std::size_t p : chosen) {
    Pair pair = pair_at(mode, n, p);

    double distance;
    Dataset adjacent = dataset;
    if (mode == SensitivityMode::kRemoveOne) {
      distance = feature_distance(dataset.rows[pair.removed]);
      adjacent.rows.erase(adjacent.rows.begin() +
                          static_cast<std::ptrdiff_t>(pair.removed));
    } else {
      distance = feature_distance(dataset.rows[pair.removed], dataset.rows[pair.replacement]);
      adjacent.rows[pair.removed] = dataset.rows[pair.replacement];
    }
    if (distance == 0.0) continue;

    const Gradient other = logistic_gradient(params, adjacent);
    double diff_sq = 0.0;
    for (std::size_t j = 0; j < base.size(); ++j) {
      double diff = base[j] - other[j];
      diff_sq += diff * diff;
    }
    double ratio = std::sqrt(diff_sq) / distance;
    if (ratio > best) best = ratio;
  }

  return SensitivityEstimate{best, chosen.size()};
}

}  // namespace sdp
