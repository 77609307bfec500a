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
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace sdp {

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

/// Invalid user-supplied configuration (bad ranges, inconsistent settings).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed compressed-gradient encoding.
class CodecError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// File I/O failure; message carries the offending path.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Domain types
// ---------------------------------------------------------------------------

/// Dense real vector: the unit of aggregation and noising. For the logistic
/// model the last coordinate is the bias slot, so a model over d features
/// yields gradients of length d + 1.
struct Gradient {
  std::vector<double> values;

  Gradient() = default;
  explicit Gradient(std::size_t dim) : values(dim, 0.0) {}
  explicit Gradient(std::vector<double> v) : values(std::move(v)) {}

  std::size_t size() const { return values.size(); }
  double& operator[](std::size_t i) { return values[i]; }
  double operator[](std::size_t i) const { return values[i]; }

  bool operator==(const Gradient&) const = default;
};

/// L2 norm, accumulated in coordinate order.
double l2_norm(const Gradient& g);

/// True when every entry is finite.
bool all_finite(const Gradient& g);

/// Linear model: d weights plus a bias term.
struct ModelParams {
  std::vector<double> weights;
  double bias = 0.0;

  ModelParams() = default;
  explicit ModelParams(std::size_t dim) : weights(dim, 0.0) {}

  std::size_t dim() const { return weights.size(); }
  bool operator==(const ModelParams&) const = default;
};

/// params <- params - step * g, where g has layout [weights..., bias].
void apply_update(ModelParams& params, const Gradient& g, double step);

/// One labeled example: feature vector plus a binary label.
struct Row {
  std::vector<double> features;
  int label = 0;  // 0 or 1
};

/// Ordered list of rows; the ordering is part of the dataset's identity.
struct Dataset {
  std::vector<Row> rows;

  std::size_t size() const { return rows.size(); }
  bool empty() const { return rows.empty(); }
  std::size_t dim() const { return rows.empty() ? 0 : rows.front().features.size(); }
};

/// Which components to disable for ablation runs.
struct AblationFlags {
  bool no_scheduler = false;
  bool no_compression = false;
  bool no_hierarchy = false;

  bool any() const { return no_scheduler || no_compression || no_hierarchy; }
  bool operator==(const AblationFlags&) const = default;
};

enum class AggregationMode {
  kWeightedMean,  // cluster means combined by cluster size (unbiased)
  kPaperSum,      // literal sum of cluster means
};

/// Full run configuration. Defaults are the reference desk-scale setup:
/// eps 0.5/round, 5 agents in 2 clusters, sigma0 1.0 decaying over 10 epochs,
/// 0.7 compression, batches of 256, 50 epochs.
struct TrainingConfig {
  double epsilon_per_round = 0.5;
  double delta = 1e-5;
  int n_agents = 5;
  int n_clusters = 2;
  double sigma0 = 1.0;
  int tau = 10;
  double compression_ratio = 0.7;
  int batch_size = 256;
  int epochs = 50;
  double clip_norm = 1.0;
  double learning_rate = 0.1;
  std::uint64_t seed = 42;
  double sigma_global = 0.0;
  AblationFlags ablation;
  AggregationMode agg_mode = AggregationMode::kWeightedMean;

  // Lifetime privacy budget. Unset means "enough for the configured run":
  // the harness sizes the ledger to epsilon_per_round times the planned
  // round count (and likewise for delta).
  std::optional<double> epsilon_total;
  std::optional<double> delta_total;

  bool operator==(const TrainingConfig&) const = default;
};

/// Throws ConfigError when any field is out of range.
void validate(const TrainingConfig& config);

const char* to_string(AggregationMode mode);
AggregationMode aggregation_mode_from_string(const std::string& name);

/// Comma-separated ablation list ("no_scheduler,no_compression,...").
AblationFlags ablation_from_names(const std::vector<std::string>& names);
std::vector<std::string> ablation_names(const AblationFlags& flags);

// ---------------------------------------------------------------------------
// Deterministic randomness
// ---------------------------------------------------------------------------

/// Deterministic pseudorandom generator. The raw stream comes from
/// std::mt19937_64 (bit-exact across platforms by specification); uniform and
/// normal draws are derived in-library so no implementation-defined
/// distribution code is involved. Normals use Box-Muller and consume exactly
/// two uniforms per pair of draws.
///
/// Instances are single-owner: never share one across threads. Substreams
/// derived via substream() are independent and may run in parallel.
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed);

  /// Next raw 64-bit word.
  std::uint64_t next_u64();

  /// Uniform double in [0, 1), 53 random bits.
  double uniform01();

  /// Uniform integer in [0, bound). bound must be positive.
  std::uint64_t next_below(std::uint64_t bound);

  /// Standard normal draw.
  double normal();

  /// Seed this generator was constructed with.
  std::uint64_t seed() const { return seed_; }

  /// Independent generator keyed on (seed, a, b) through a fixed SplitMix64
  /// mix, so per-(agent, round) streams never depend on execution order.
  SeededRng substream(std::uint64_t a, std::uint64_t b) const;

 private:
  std::mt19937_64 engine_;
  std::uint64_t seed_;
  double cached_normal_ = 0.0;
  bool has_cached_normal_ = false;
};

/// SplitMix64 finalizer used for substream derivation.
std::uint64_t splitmix64(std::uint64_t x);

/// Stream tag for the per-round global-noise generator. Distinct from every
/// agent id, which are always < n_agents.
inline constexpr std::uint64_t kGlobalNoiseStream = 0xffffffffffffffffULL;

// ---------------------------------------------------------------------------
// Synthetic task
// ---------------------------------------------------------------------------

/// Two balanced Gaussian classes with unit variance, class means `separation`
/// apart along a random unit direction. Labels alternate 0,1,0,1,... so any
/// contiguous slice stays roughly balanced; counts are ceil(n/2) zeros and
/// floor(n/2) ones.
Dataset generate_synthetic_dataset(int d, int n, double separation, SeededRng& rng);

/// Mean binary-cross-entropy gradient of the logistic model over `batch`,
/// layout [d weight slots, bias slot]. Throws on an empty batch or a feature
/// dimension that disagrees with params.
Gradient logistic_gradient(const ModelParams& params, const Dataset& batch);

/// Fraction of rows whose sign prediction matches the label.
double accuracy(const ModelParams& params, const Dataset& data);

/// Draw k = min(batch_size, n) distinct indices in [0, n) by partial
/// Fisher-Yates. When batch_size >= n the whole range is returned in order
/// and no randomness is consumed.
std::vector<std::size_t> sample_batch_indices(std::size_t n, std::size_t batch_size,
                                              SeededRng& rng);

/// Materialize the rows at `indices`, in index-list order.
Dataset take_rows(const Dataset& data, const std::vector<std::size_t>& indices);

}  // namespace sdp
