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

#include "sdp/core.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace sdp {

double l2_norm(const Gradient& g) {
  double sum = 0.0;
  for (double v : g.values) sum += v * v;
  return std::sqrt(sum);
}

bool all_finite(const Gradient& g) {
  return std::all_of(g.values.begin(), g.values.end(),
                     [](double v) { return std::isfinite(v); });
}

void apply_update(ModelParams& params, const Gradient& g, double step) {
  if (g.size() != params.dim() + 1) {
    throw std::invalid_argument("apply_update: gradient length " +
                                std::to_string(g.size()) + " does not match " +
                                std::to_string(params.dim()) + "+1 parameters");
  }
  for (std::size_t j = 0; j < params.dim(); ++j) {
    params.weights[j] -= step * g[j];
  }
  params.bias -= step * g[params.dim()];
}

void validate(const TrainingConfig& config) {
  std::ostringstream bad;
  auto fail = [&bad](const std::string& msg) { bad << (bad.tellp() > 0 ? "; " : "") << msg; };

  if (!(config.epsilon_per_round > 0.0)) fail("epsilon must be > 0");
  if (!(config.delta > 0.0 && config.delta < 1.0)) fail("delta must be in (0, 1)");
  if (config.n_agents < 1) fail("agents must be >= 1");
  if (config.n_clusters < 1) fail("clusters must be >= 1");
  if (config.n_clusters > config.n_agents) fail("clusters must not exceed agents");
  if (!(config.sigma0 >= 0.0)) fail("sigma0 must be >= 0");
  if (config.tau < 1) fail("tau must be >= 1");
  if (!(config.compression_ratio > 0.0 && config.compression_ratio <= 1.0))
    fail("ratio must be in (0, 1]");
  if (config.batch_size < 1) fail("batch size must be >= 1");
  if (config.epochs < 1) fail("epochs must be >= 1");
  if (!(config.clip_norm > 0.0)) fail("clip norm must be > 0");
  if (!(config.learning_rate > 0.0)) fail("learning rate must be > 0");
  if (!(config.sigma_global >= 0.0)) fail("sigma_global must be >= 0");
  if (config.epsilon_total && !(*config.epsilon_total > 0.0))
    fail("epsilon_total must be > 0");
  if (config.delta_total && !(*config.delta_total > 0.0 && *config.delta_total < 1.0))
    fail("delta_total must be in (0, 1)");

  if (bad.tellp() > 0) throw ConfigError("invalid configuration: " + bad.str());
}

const char* to_string(AggregationMode mode) {
  return mode == AggregationMode::kWeightedMean ? "weighted_mean" : "paper_sum";
}

AggregationMode aggregation_mode_from_string(const std::string& name) {
  if (name == "weighted_mean") return AggregationMode::kWeightedMean;
  if (name == "paper_sum") return AggregationMode::kPaperSum;
  throw ConfigError("unknown aggregation mode: " + name);
}

AblationFlags ablation_from_names(const std::vector<std::string>& names) {
  AblationFlags flags;
  for (const auto& name : names) {
    if (name == "no_scheduler") {
      flags.no_scheduler = true;
    } else if (name == "no_compression") {
      flags.no_compression = true;
    } else if (name == "no_hierarchy") {
      flags.no_hierarchy = true;
    } else if (!name.empty()) {
      throw ConfigError("unknown ablation: " + name);
    }
  }
  return flags;
}

std::vector<std::string> ablation_names(const AblationFlags& flags) {
  std::vector<std::string> names;
  if (flags.no_scheduler) names.push_back("no_scheduler");
  if (flags.no_compression) names.push_back("no_compression");
  if (flags.no_hierarchy) names.push_back("no_hierarchy");
  return names;
}

// ---------------------------------------------------------------------------
// SeededRng
// ---------------------------------------------------------------------------

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

SeededRng::SeededRng(std::uint64_t seed) : engine_(seed), seed_(seed) {}

std::uint64_t SeededRng::next_u64() { return engine_(); }

double SeededRng::uniform01() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

std::uint64_t SeededRng::next_below(std::uint64_t bound) {
  if (bound == 0) throw std::invalid_argument("next_below: bound must be positive");
  auto r = static_cast<std::uint64_t>(uniform01() * static_cast<double>(bound));
  return r < bound ? r : bound - 1;
}

double SeededRng::normal() {
  if (has_cached_normal_) {
    has_cached_normal_ = false;
    return cached_normal_;
  }
  // Box-Muller; u1 shifted into (0, 1] so the log is finite.
  double u1 = 1.0 - uniform01();
  double u2 = uniform01();
  double radius = std::sqrt(-2.0 * std::log(u1));
  double angle = 2.0 * std::numbers::pi * u2;
  cached_normal_ = radius * std::sin(angle);
  has_cached_normal_ = true;
  return radius * std::cos(angle);
}

SeededRng SeededRng::substream(std::uint64_t a, std::uint64_t b) const {
  std::uint64_t h = splitmix64(seed_);
  h = splitmix64(h ^ a);
  h = splitmix64(h ^ b);
  return SeededRng(h);
}

// ---------------------------------------------------------------------------
// Synthetic task
// ---------------------------------------------------------------------------

Dataset generate_synthetic_dataset(int d, int n, double separation, SeededRng& rng) {
  if (d < 1) throw ConfigError("dataset dimension must be >= 1");
  if (n < 2) throw ConfigError("dataset size must be >= 2");
  if (!(separation >= 0.0)) throw ConfigError("separation must be >= 0");

  // Random unit direction for the class-mean axis.
  std::vector<double> direction(static_cast<std::size_t>(d));
  double norm_sq = 0.0;
  for (auto& u : direction) {
    u = rng.normal();
    norm_sq += u * u;
  }
  if (norm_sq > 0.0) {
    double inv = 1.0 / std::sqrt(norm_sq);
    for (auto& u : direction) u *= inv;
  } else {
    direction[0] = 1.0;
  }

  Dataset data;
  data.rows.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    Row row;
    row.label = i % 2;
    double sign = row.label == 1 ? 1.0 : -1.0;
    row.features.resize(static_cast<std::size_t>(d));
    for (int j = 0; j < d; ++j) {
      double mean = sign * 0.5 * separation * direction[static_cast<std::size_t>(j)];
      row.features[static_cast<std::size_t>(j)] = mean + rng.normal();
    }
    data.rows.push_back(std::move(row));
  }
  return data;
}

namespace {

double sigmoid(double z) {
  if (z >= 0.0) {
    return 1.0 / (1.0 + std::exp(-z));
  }
  double e = std::exp(z);
  return e / (1.0 + e);
}

}  // namespace

Gradient logistic_gradient(const ModelParams& params, const Dataset& batch) {
  if (batch.empty()) throw std::invalid_argument("logistic_gradient: empty batch");
  const std::size_t d = params.dim();
  Gradient grad(d + 1);
  for (const Row& row : batch.rows) {
    if (row.features.size() != d) {
      throw std::invalid_argument("logistic_gradient: feature dimension " +
                                  std::to_string(row.features.size()) +
                                  " does not match model dimension " + std::to_string(d));
    }
    double z = params.bias;
    for (std::size_t j = 0; j < d; ++j) z += params.weights[j] * row.features[j];
    double residual = sigmoid(z) - static_cast<double>(row.label);
    for (std::size_t j = 0; j < d; ++j) grad[j] += residual * row.features[j];
    grad[d] += residual;
  }
  const double inv_n = 1.0 / static_cast<double>(batch.size());
  for (auto& v : grad.values) v *= inv_n;
  return grad;
}

double accuracy(const ModelParams& params, const Dataset& data) {
  if (data.empty()) return 0.0;
  std::size_t correct = 0;
  for (const Row& row : data.rows) {
    double z = params.bias;
    for (std::size_t j = 0; j < params.dim(); ++j) z += params.weights[j] * row.features[j];
    int predicted = z >= 0.0 ? 1 : 0;
    if (predicted == row.label) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(data.size());
}

std::vector<std::size_t> sample_batch_indices(std::size_t n, std::size_t batch_size,
                                              SeededRng& rng) {
  std::vector<std::size_t> pool(n);
  for (std::size_t i = 0; i < n; ++i) pool[i] = i;
  if (batch_size >= n) return pool;

  for (std::size_t i = 0; i < batch_size; ++i) {
    std::size_t j = i + static_cast<std::size_t>(rng.next_below(n - i));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(batch_size);
  return pool;
}

Dataset take_rows(const Dataset& data, const std::vector<std::size_t>& indices) {
  Dataset batch;
  batch.rows.reserve(indices.size());
  for (std::size_t i : indices) batch.rows.push_back(data.rows[i]);
  return batch;
}

}  // namespace sdp
