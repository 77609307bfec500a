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

#include "doctest.h"

using namespace sdp;

namespace {

Gradient random_gradient(std::size_t d, SeededRng& rng, double scale = 1.0) {
  Gradient g(d);
  for (auto& v : g.values) v = scale * rng.normal();
  return g;
}

// Brute-force sensitivity oracle: builds every adjacent dataset explicitly
// and maximizes the ratio itself. Shares only the gradient primitive with
// the implementation.
double brute_force_sensitivity(const ModelParams& params, const Dataset& dataset,
                               SensitivityMode mode) {
  const Gradient base = logistic_gradient(params, dataset);
  const std::size_t n = dataset.size();
  double best = 0.0;

  auto ratio_against = [&](const Dataset& adjacent, double distance) {
    if (distance == 0.0) return;
    Gradient other = logistic_gradient(params, adjacent);
    double diff_sq = 0.0;
    for (std::size_t j = 0; j < base.size(); ++j)
      diff_sq += (base[j] - other[j]) * (base[j] - other[j]);
    double r = std::sqrt(diff_sq) / distance;
    if (r > best) best = r;
  };

  if (mode == SensitivityMode::kRemoveOne) {
    for (std::size_t i = 0; i < n; ++i) {
      Dataset adjacent = dataset;
      adjacent.rows.erase(adjacent.rows.begin() + static_cast<std::ptrdiff_t>(i));
      double dist_sq = 0.0;
      for (double v : dataset.rows[i].features) dist_sq += v * v;
      ratio_against(adjacent, std::sqrt(dist_sq));
    }
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (i == j) continue;
        Dataset adjacent = dataset;
        adjacent.rows[i] = dataset.rows[j];
        double dist_sq = 0.0;
        for (std::size_t k = 0; k < dataset.rows[i].features.size(); ++k) {
          double diff = dataset.rows[i].features[k] - dataset.rows[j].features[k];
          dist_sq += diff * diff;
        }
        ratio_against(adjacent, std::sqrt(dist_sq));
      }
    }
  }
  return best;
}

Dataset random_dataset(std::size_t n, std::size_t d, SeededRng& rng) {
  Dataset data;
  for (std::size_t i = 0; i < n; ++i) {
    Row row;
    row.label = static_cast<int>(rng.next_below(2));
    for (std::size_t j = 0; j < d; ++j) row.features.push_back(rng.normal());
    data.rows.push_back(std::move(row));
  }
  return data;
}

}  // namespace

TEST_CASE("clip leaves short vectors untouched") {
  Gradient g(std::vector<double>{3.0, 4.0});
  Gradient out = clip(g, 10.0);
  CHECK(out.values == g.values);
}

TEST_CASE("clip rescales long vectors onto the ball") {
  Gradient g(std::vector<double>{3.0, 4.0});
  Gradient out = clip(g, 1.0);
  CHECK(out[0] == doctest::Approx(0.6).epsilon(1e-15));
  CHECK(out[1] == doctest::Approx(0.8).epsilon(1e-15));
  CHECK(l2_norm(out) <= 1.0 + 1e-12);
}

TEST_CASE("clip passes the zero vector through") {
  Gradient g(std::vector<double>{0.0, 0.0, 0.0});
  CHECK(clip(g, 0.5).values == g.values);
}

TEST_CASE("clip norm bound and idempotence over random inputs") {
  SeededRng rng(31);
  for (int trial = 0; trial < 200; ++trial) {
    std::size_t d = 1 + static_cast<std::size_t>(rng.next_below(12));
    Gradient g = random_gradient(d, rng, 3.0);
    double bound = 0.1 + 2.0 * rng.uniform01();
    Gradient once = clip(g, bound);
    CHECK(l2_norm(once) <= bound + 1e-12);
    Gradient twice = clip(once, bound);
    for (std::size_t j = 0; j < d; ++j) CHECK(std::fabs(twice[j] - once[j]) <= 1e-12);
    if (l2_norm(g) <= bound) CHECK(once.values == g.values);
  }
  CHECK_THROWS_AS(clip(Gradient(std::vector<double>{1.0}), 0.0), std::invalid_argument);
}

TEST_CASE("calibrate implements the Gaussian-mechanism closed form") {
  NoiseParams params = calibrate(0.5, 1e-5, 1.0);
  const double expected = 1.0 * std::sqrt(2.0 * std::log(1.25 / 1e-5)) / 0.5;
  CHECK(std::fabs(params.sigma - expected) <= 1e-12);
  CHECK(params.epsilon == 0.5);
  CHECK(params.delta == 1e-5);
  CHECK(params.clip_norm == 1.0);
}

TEST_CASE("calibrate scales exactly with epsilon and the clip norm") {
  NoiseParams base = calibrate(0.5, 1e-5, 1.0);
  CHECK(calibrate(1.0, 1e-5, 1.0).sigma == base.sigma / 2.0);
  CHECK(calibrate(0.5, 1e-5, 2.0).sigma == base.sigma * 2.0);
}

TEST_CASE("calibrate is monotone in every parameter") {
  SeededRng rng(77);
  for (int trial = 0; trial < 100; ++trial) {
    double eps = 0.05 + 2.0 * rng.uniform01();
    double delta = 1e-7 + 0.1 * rng.uniform01();
    double bound = 0.1 + 3.0 * rng.uniform01();
    double sigma = calibrate(eps, delta, bound).sigma;
    CHECK(calibrate(eps * 1.5, delta, bound).sigma < sigma);
    CHECK(calibrate(eps, delta, bound * 1.5).sigma > sigma);
    CHECK(calibrate(eps, delta * 2.0, bound).sigma < sigma);
  }
}

TEST_CASE("calibrate rejects out-of-range parameters") {
  CHECK_THROWS_AS(calibrate(0.0, 1e-5, 1.0), ConfigError);
  CHECK_THROWS_AS(calibrate(0.5, 0.0, 1.0), ConfigError);
  CHECK_THROWS_AS(calibrate(0.5, 1.0, 1.0), ConfigError);
  CHECK_THROWS_AS(calibrate(0.5, 1e-5, 0.0), ConfigError);
}

TEST_CASE("zero sigma adds no noise and consumes no randomness") {
  SeededRng rng(3);
  std::uint64_t first = SeededRng(3).next_u64();
  Gradient g(std::vector<double>{1.0, -2.0, 0.25});
  Gradient out = add_noise(g, 0.0, rng);
  CHECK(out.values == g.values);
  CHECK(rng.next_u64() == first);
}

TEST_CASE("noise is zero-mean") {
  SeededRng rng(42);
  const int trials = 100000;
  const std::size_t d = 8;
  Gradient zero(d);
  std::vector<double> mean(d, 0.0);
  for (int t = 0; t < trials; ++t) {
    Gradient noisy = add_noise(zero, 1.0, rng);
    for (std::size_t j = 0; j < d; ++j) mean[j] += noisy[j];
  }
  const double bound = 5.0 / std::sqrt(static_cast<double>(trials));
  for (std::size_t j = 0; j < d; ++j) {
    CHECK(std::fabs(mean[j] / trials) <= bound);
  }
}

TEST_CASE("noise variance tracks sigma^2") {
  SeededRng rng(2024);
  const std::size_t n = 100000;
  Gradient zero(n);
  Gradient noisy = add_noise(zero, 1.0, rng);
  double sum = 0.0;
  double sum_sq = 0.0;
  for (double v : noisy.values) {
    sum += v;
    sum_sq += v * v;
  }
  double mean = sum / static_cast<double>(n);
  double variance = sum_sq / static_cast<double>(n) - mean * mean;
  CHECK(variance > 0.98);
  CHECK(variance < 1.02);
}

TEST_CASE("sensitivity estimate equals exhaustive enumeration") {
  SeededRng data_rng(8);
  Dataset data = random_dataset(4, 3, data_rng);
  ModelParams params(3);
  params.weights = {0.2, -0.4, 0.1};
  params.bias = 0.05;

  for (auto mode : {SensitivityMode::kRemoveOne, SensitivityMode::kReplaceOne}) {
    SeededRng rng(1);
    SensitivityEstimate estimate = estimate_sensitivity(params, data, mode, rng, 1000);
    CHECK(estimate.value == brute_force_sensitivity(params, data, mode));
    CHECK(estimate.pairs_examined ==
          (mode == SensitivityMode::kRemoveOne ? 4 : 12));
  }
}

TEST_CASE("identical rows give zero sensitivity under replace-one") {
  Dataset data;
  for (int i = 0; i < 4; ++i) data.rows.push_back({{1.0, 2.0}, 1});
  ModelParams params(2);
  params.weights = {0.3, -0.1};
  SeededRng rng(1);
  SensitivityEstimate estimate =
      estimate_sensitivity(params, data, SensitivityMode::kReplaceOne, rng, 100);
  CHECK(estimate.value == 0.0);
}

TEST_CASE("all-zero features give zero sensitivity") {
  Dataset data;
  data.rows.push_back({{0.0, 0.0}, 1});
  data.rows.push_back({{0.0, 0.0}, 0});
  data.rows.push_back({{0.0, 0.0}, 1});
  ModelParams params(2);
  SeededRng rng(1);
  SensitivityEstimate estimate =
      estimate_sensitivity(params, data, SensitivityMode::kRemoveOne, rng, 100);
  CHECK(estimate.value == 0.0);
}

TEST_CASE("subsampled sensitivity never exceeds the exhaustive maximum") {
  SeededRng data_rng(15);
  Dataset data = random_dataset(12, 4, data_rng);
  ModelParams params(4);
  params.weights = {0.5, -0.2, 0.3, 0.1};
  double exhaustive = brute_force_sensitivity(params, data, SensitivityMode::kReplaceOne);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    SeededRng rng(seed);
    SensitivityEstimate estimate =
        estimate_sensitivity(params, data, SensitivityMode::kReplaceOne, rng, 20);
    CHECK(estimate.pairs_examined == 20);
    CHECK(estimate.value <= exhaustive);
  }
}

TEST_CASE("sensitivity estimation validates its inputs") {
  Dataset tiny;
  tiny.rows.push_back({{1.0}, 0});
  ModelParams params(1);
  SeededRng rng(1);
  CHECK_THROWS_AS(
      estimate_sensitivity(params, tiny, SensitivityMode::kRemoveOne, rng, 10),
      std::invalid_argument);
  tiny.rows.push_back({{2.0}, 1});
  CHECK_THROWS_AS(
      estimate_sensitivity(params, tiny, SensitivityMode::kRemoveOne, rng, 0),
      std::invalid_argument);
}
