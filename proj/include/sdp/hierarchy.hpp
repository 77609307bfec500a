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
#include <span>
#include <vector>

#include "sdp/compression.hpp"
#include "sdp/core.hpp"
#include "sdp/mechanism.hpp"
#include "sdp/scheduler.hpp"

namespace sdp {

/// Static assignment of agents to clusters. Every cluster id in [0, m) has at
/// least one member and m <= n_agents.
struct ClusterTopology {
  int n_agents = 0;
  int n_clusters = 0;
  std::vector<int> assignments;  // agent id -> cluster id
};

/// One simulated participant: its data shard and its copy of the model.
struct AgentState {
  int agent_id = 0;
  Dataset shard;
  ModelParams params;
};

/// Outcome of one aggregation round.
struct RoundReport {
  std::size_t round = 0;
  Gradient global_update;
  std::vector<Gradient> per_cluster_updates;  // length n_clusters
  double sigma_used = 0.0;
  double epsilon_spent = 0.0;
  std::uint64_t bytes_transmitted = 0;  // sum of the agents' encoded updates
};

enum class AgentExecution {
  kSerial,
  kParallel,  // one thread per agent; results are bitwise identical to serial
};

/// Round-robin assignment: agent j goes to cluster j mod n_clusters.
ClusterTopology build_topology(int n_agents, int n_clusters);

/// Number of agents assigned to each cluster.
std::vector<int> cluster_sizes(const ClusterTopology& topology);

/// One agent's contribution for a round: sample a batch of
/// min(batch_size, |shard|) rows, take the logistic gradient, clip to
/// noise.clip_norm, add N(0, sigma_t^2) noise per coordinate, compress.
CompressedGradient agent_update(const AgentState& agent, int batch_size,
                                const NoiseParams& noise, double sigma_t, double ratio,
                                SeededRng& rng);

/// Cluster mean: decompress each update, sum in list order, divide by count.
Gradient aggregate_cluster(std::span<const CompressedGradient> updates);

/// Combine cluster means. kWeightedMean weights each mean by its cluster's
/// agent count (unbiased); kPaperSum adds them unweighted. Global noise
/// N(0, sigma_global^2) is added per coordinate, none when sigma_global == 0.
Gradient aggregate_global(std::span<const Gradient> cluster_means,
                          std::span<const int> cluster_sizes, double sigma_global,
                          AggregationMode mode, SeededRng& rng);

/// Epoch reached after `round` full rounds: floor(round*batch*agents/total).
std::size_t epoch_of_round(std::size_t round, int batch_size, int n_agents,
                           std::size_t total_rows);

/// Execute one full round: every agent produces a noisy compressed update
/// from its substream of rng_root, clusters average, the global combination
/// is applied to every agent's params in lockstep. Parallel and serial
/// execution produce bitwise-identical reports.
///
/// When captured_updates is non-null it receives the per-agent compressed
/// updates in agent order (used for trace dumps).
RoundReport run_round(std::vector<AgentState>& agents, const ClusterTopology& topology,
                      const TrainingConfig& config, const Schedule& schedule,
                      std::size_t round, const SeededRng& rng_root,
                      AgentExecution exec = AgentExecution::kParallel,
                      std::vector<CompressedGradient>* captured_updates = nullptr);

}  // namespace sdp
