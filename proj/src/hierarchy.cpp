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

#include "sdp/hierarchy.hpp"

#include <exception>
#include <thread>

namespace sdp {

ClusterTopology build_topology(int n_agents, int n_clusters) {
  if (n_agents < 1) throw ConfigError("topology: agents must be >= 1");
  if (n_clusters < 1 || n_clusters > n_agents)
    throw ConfigError("topology: clusters must be in [1, agents]");
  ClusterTopology topology;
  topology.n_agents = n_agents;
  topology.n_clusters = n_clusters;
  topology.assignments.resize(static_cast<std::size_t>(n_agents));
  for (int j = 0; j < n_agents; ++j)
    topology.assignments[static_cast<std::size_t>(j)] = j % n_clusters;
  return topology;
}

std::vector<int> cluster_sizes(const ClusterTopology& topology) {
  std::vector<int> sizes(static_cast<std::size_t>(topology.n_clusters), 0);
  for (int c : topology.assignments) ++sizes[static_cast<std::size_t>(c)];
  return sizes;
}

CompressedGradient agent_update(const AgentState& agent, int batch_size,
                                const NoiseParams& noise, double sigma_t, double ratio,
                                SeededRng& rng) {
  if (batch_size < 1) throw std::invalid_argument("agent_update: batch_size must be >= 1");
  if (agent.shard.empty()) throw std::invalid_argument("agent_update: empty shard");

  auto indices = sample_batch_indices(agent.shard.size(),
                                      static_cast<std::size_t>(batch_size), rng);
  Dataset batch = take_rows(agent.shard, indices);
  Gradient g = logistic_gradient(agent.params, batch);
  g = clip(g, noise.clip_norm);
  g = add_noise(g, sigma_t, rng);
  return compress(g, ratio);
}

Gradient aggregate_cluster(std::span<const CompressedGradient> updates) {
  Gradient sum = aggregate_compressed(updates);
  const double inv = 1.0 / static_cast<double>(updates.size());
  for (auto& v : sum.values) v *= inv;
  return sum;
}

Gradient aggregate_global(std::span<const Gradient> cluster_means,
                          std::span<const int> sizes, double sigma_global,
                          AggregationMode mode, SeededRng& rng) {
  if (cluster_means.empty())
    throw std::invalid_argument("aggregate_global: no cluster means");
  if (cluster_means.size() != sizes.size())
    throw std::invalid_argument("aggregate_global: means/sizes length mismatch");

  const std::size_t dim = cluster_means.front().size();
  std::int64_t total_agents = 0;
  for (std::size_t j = 0; j < sizes.size(); ++j) {
    if (sizes[j] < 1) throw std::invalid_argument("aggregate_global: sizes must be positive");
    if (cluster_means[j].size() != dim)
      throw std::invalid_argument("aggregate_global: cluster mean dim mismatch");
    total_agents += sizes[j];
  }

  Gradient combined(dim);
  for (std::size_t j = 0; j < cluster_means.size(); ++j) {
    double weight = mode == AggregationMode::kWeightedMean
                        ? static_cast<double>(sizes[j]) / static_cast<double>(total_agents)
                        : 1.0;
    for (std::size_t i = 0; i < dim; ++i) combined[i] += weight * cluster_means[j][i];
  }
  return add_noise(combined, sigma_global, rng);
}

std::size_t epoch_of_round(std::size_t round, int batch_size, int n_agents,
                           std::size_t total_rows) {
  if (total_rows == 0) throw std::invalid_argument("epoch_of_round: empty dataset");
  return round * static_cast<std::size_t>(batch_size) *
         static_cast<std::size_t>(n_agents) / total_rows;
}

RoundReport run_round(std::vector<AgentState>& agents, const ClusterTopology& topology,
                      const TrainingConfig& config, const Schedule& schedule,
                      std::size_t round, const SeededRng& rng_root, AgentExecution exec,
                      std::vector<CompressedGradient>* captured_updates) {
  if (agents.size() != static_cast<std::size_t>(topology.n_agents))
    throw std::invalid_argument("run_round: agent count does not match topology");

  std::size_t total_rows = 0;
  for (const auto& agent : agents) total_rows += agent.shard.size();

  const std::size_t epoch =
      epoch_of_round(round, config.batch_size, topology.n_agents, total_rows);
  const double sigma_t = noise_at(schedule, config.sigma0, static_cast<int>(epoch));
  const NoiseParams noise =
      calibrate(config.epsilon_per_round, config.delta, config.clip_norm);

  // Per-agent updates. Each agent draws from its own (seed, agent, round)
  // substream, so the execution order cannot affect the result.
  std::vector<CompressedGradient> updates(agents.size());
  auto compute_update = [&](std::size_t i) {
    SeededRng agent_rng =
        rng_root.substream(static_cast<std::uint64_t>(agents[i].agent_id), round);
    updates[i] = agent_update(agents[i], config.batch_size, noise, sigma_t,
                              config.compression_ratio, agent_rng);
  };

  if (exec == AgentExecution::kParallel && agents.size() > 1) {
    std::vector<std::exception_ptr> failures(agents.size());
    std::vector<std::thread> workers;
    workers.reserve(agents.size());
    for (std::size_t i = 0; i < agents.size(); ++i) {
      workers.emplace_back([&, i] {
        try {
          compute_update(i);
        } catch (...) {
          failures[i] = std::current_exception();
        }
      });
    }
    for (auto& worker : workers) worker.join();
    for (const auto& failure : failures)
      if (failure) std::rethrow_exception(failure);
  } else {
    for (std::size_t i = 0; i < agents.size(); ++i) compute_update(i);
  }

  RoundReport report;
  report.round = round;
  report.sigma_used = sigma_t;
  report.epsilon_spent = config.epsilon_per_round;
  for (const auto& update : updates) report.bytes_transmitted += encoded_size(update);

  // Cluster means, members taken in ascending agent order.
  std::vector<int> sizes = cluster_sizes(topology);
  report.per_cluster_updates.reserve(sizes.size());
  for (int cluster = 0; cluster < topology.n_clusters; ++cluster) {
    std::vector<CompressedGradient> members;
    members.reserve(static_cast<std::size_t>(sizes[static_cast<std::size_t>(cluster)]));
    for (std::size_t i = 0; i < agents.size(); ++i) {
      if (topology.assignments[i] == cluster) members.push_back(updates[i]);
    }
    report.per_cluster_updates.push_back(aggregate_cluster(members));
  }

  SeededRng global_rng = rng_root.substream(kGlobalNoiseStream, round);
  report.global_update = aggregate_global(report.per_cluster_updates, sizes,
                                          config.sigma_global, config.agg_mode, global_rng);

  // Lockstep model update: every agent applies the same global step.
  for (auto& agent : agents)
    apply_update(agent.params, report.global_update, config.learning_rate);

  if (captured_updates) *captured_updates = std::move(updates);
  return report;
}

}  // namespace sdp
