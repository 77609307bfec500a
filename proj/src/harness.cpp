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

#include "sdp/harness.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "sdp/accountant.hpp"
#include "sdp/scheduler.hpp"

namespace sdp {

namespace {

using ordered_json = nlohmann::ordered_json;

void validate_task(const TaskSpec& task) {
  if (task.dim < 1) throw ConfigError("task: dim must be >= 1");
  if (task.n_rows < 2) throw ConfigError("task: n_rows must be >= 2");
  if (!(task.separation >= 0.0)) throw ConfigError("task: separation must be >= 0");
}

Schedule make_schedule(const TrainingConfig& config) {
  if (config.ablation.no_scheduler) return Schedule::constant(1.0);
  return Schedule::linear_decay(1.0, config.tau, 0.1);
}

TrainingConfig effective_config(const TrainingConfig& config) {
  TrainingConfig eff = config;
  if (config.ablation.no_compression) eff.compression_ratio = 1.0;
  if (config.ablation.no_hierarchy) eff.n_clusters = 1;
  return eff;
}

void write_trace_file(const std::filesystem::path& dir, std::size_t round,
                      std::span<const CompressedGradient> updates) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create trace directory " + dir.string() + ": " + ec.message());
  const auto path = dir / trace_file_name(round);
  std::vector<std::uint8_t> bytes;
  for (const auto& update : updates) encode_to(bytes, update);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open trace file " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("failed writing trace file " + path.string());
}

}  // namespace

std::string trace_file_name(std::size_t round) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "round-%05zu.bin", round);
  return buf;
}

ReportFormat report_format_from_string(const std::string& name) {
  if (name == "csv") return ReportFormat::kCsv;
  if (name == "json") return ReportFormat::kJson;
  throw ConfigError("unknown report format: " + name);
}

std::string variant_name(const TrainingConfig& config) {
  auto names = ablation_names(config.ablation);
  if (names.empty()) return "full";
  std::string joined = names.front();
  for (std::size_t i = 1; i < names.size(); ++i) joined += "+" + names[i];
  return joined;
}

std::uint64_t planned_rounds(int epochs, int batch_size, int n_agents,
                             std::size_t total_rows) {
  const std::uint64_t per_round =
      static_cast<std::uint64_t>(batch_size) * static_cast<std::uint64_t>(n_agents);
  const std::uint64_t needed = static_cast<std::uint64_t>(epochs) * total_rows;
  return (needed + per_round - 1) / per_round;
}

ExperimentResult run_experiment(const TrainingConfig& config, const TaskSpec& task,
                                const RunOptions& options) {
  validate(config);
  validate_task(task);

  const auto start = std::chrono::steady_clock::now();

  SeededRng data_rng(config.seed);
  Dataset full = generate_synthetic_dataset(task.dim, task.n_rows, task.separation, data_rng);

  // 80/20 train/test split, taken before sharding; the test rows never reach
  // the agents.
  const std::size_t n_test = full.size() / 5;
  const std::size_t n_train = full.size() - n_test;
  Dataset train;
  train.rows.assign(full.rows.begin(), full.rows.begin() + static_cast<std::ptrdiff_t>(n_train));
  Dataset test;
  test.rows.assign(full.rows.begin() + static_cast<std::ptrdiff_t>(n_train), full.rows.end());

  const TrainingConfig eff = effective_config(config);
  const Schedule schedule = make_schedule(config);

  const auto n_agents = static_cast<std::size_t>(eff.n_agents);
  if (n_train < n_agents)
    throw ConfigError("not enough training rows (" + std::to_string(n_train) +
                      ") to shard across " + std::to_string(eff.n_agents) + " agents");

  ClusterTopology topology = build_topology(eff.n_agents, eff.n_clusters);

  // Contiguous even shards; the remainder rows go to the last agent.
  const std::size_t shard_size = n_train / n_agents;
  std::vector<AgentState> agents;
  agents.reserve(n_agents);
  for (std::size_t i = 0; i < n_agents; ++i) {
    AgentState agent;
    agent.agent_id = static_cast<int>(i);
    const std::size_t begin = i * shard_size;
    const std::size_t end = (i + 1 == n_agents) ? n_train : begin + shard_size;
    agent.shard.rows.assign(train.rows.begin() + static_cast<std::ptrdiff_t>(begin),
                            train.rows.begin() + static_cast<std::ptrdiff_t>(end));
    agent.params = ModelParams(static_cast<std::size_t>(task.dim));
    agents.push_back(std::move(agent));
  }

  const std::uint64_t rounds_needed =
      planned_rounds(eff.epochs, eff.batch_size, eff.n_agents, n_train);
  const double eps_total = config.epsilon_total.value_or(
      config.epsilon_per_round * static_cast<double>(rounds_needed));
  const double delta_total = config.delta_total.value_or(
      config.delta * static_cast<double>(rounds_needed));
  if (!(delta_total < 1.0))
    throw ConfigError("lifetime delta would reach " + std::to_string(delta_total) +
                      "; set delta_total explicitly");
  BudgetLedger ledger(eps_total, delta_total);

  const SeededRng rng_root(config.seed);

  ExperimentResult result;
  result.config = config;

  std::size_t round = 0;
  std::size_t epochs_done = 0;
  std::vector<CompressedGradient> captured;
  while (epoch_of_round(round, eff.batch_size, eff.n_agents, n_train) <
         static_cast<std::size_t>(eff.epochs)) {
    try {
      ledger = ledger.record(config.epsilon_per_round, config.delta);
    } catch (const BudgetExhaustedError&) {
      result.budget_exhausted = true;
      break;
    }

    RoundReport report =
        run_round(agents, topology, eff, schedule, round, rng_root, options.exec,
                  options.trace_dir ? &captured : nullptr);
    if (options.trace_dir) write_trace_file(*options.trace_dir, round, captured);
    result.bytes_transmitted_total += report.bytes_transmitted;
    ++round;

    const std::size_t now =
        std::min<std::size_t>(epoch_of_round(round, eff.batch_size, eff.n_agents, n_train),
                              static_cast<std::size_t>(eff.epochs));
    if (now > epochs_done) {
      const double train_acc = accuracy(agents.front().params, train);
      for (std::size_t e = epochs_done; e < now; ++e)
        result.accuracy_per_epoch.push_back(train_acc);
      epochs_done = now;
    }
  }

  result.final_train_accuracy = accuracy(agents.front().params, train);
  result.final_test_accuracy = accuracy(agents.front().params, test);
  result.epsilon_spent = ledger.epsilon_spent();
  result.delta_spent = ledger.delta_spent();
  result.epsilon_budget = ledger.epsilon_total();
  result.delta_budget = ledger.delta_total();
  result.rounds_completed = round;
  result.epochs_completed = epochs_done;

  const auto elapsed = std::chrono::steady_clock::now() - start;
  result.wall_time_seconds = std::chrono::duration<double>(elapsed).count();
  return result;
}

std::vector<ExperimentResult> run_ablation_grid(const TrainingConfig& config,
                                                const TaskSpec& task,
                                                const RunOptions& options) {
  validate(config);
  const AblationFlags variants[] = {
      {},
      {.no_scheduler = true},
      {.no_compression = true},
      {.no_hierarchy = true},
  };
  std::vector<ExperimentResult> results;
  results.reserve(4);
  for (const auto& flags : variants) {
    TrainingConfig variant = config;
    variant.ablation = flags;
    RunOptions variant_options = options;
    if (options.trace_dir)
      variant_options.trace_dir = *options.trace_dir / variant_name(variant);
    results.push_back(run_experiment(variant, task, variant_options));
  }
  return results;
}

double round_6sig(double v) {
  if (!std::isfinite(v)) return v;
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return std::strtod(buf, nullptr);
}

namespace {

std::string fmt_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string render_csv(std::span<const ExperimentResult> results) {
  std::ostringstream out;
  out << "variant,accuracy_train,accuracy_test,epsilon_spent,runtime_s,bytes_total,seed\n";
  for (const auto& r : results) {
    out << variant_name(r.config) << ',' << fmt_real(r.final_train_accuracy) << ','
        << fmt_real(r.final_test_accuracy) << ',' << fmt_real(r.epsilon_spent) << ','
        << fmt_real(r.wall_time_seconds) << ',' << r.bytes_transmitted_total << ','
        << r.config.seed << '\n';
  }
  return out.str();
}

ordered_json config_to_json(const TrainingConfig& c) {
  ordered_json j;
  j["epsilon_per_round"] = round_6sig(c.epsilon_per_round);
  j["delta"] = round_6sig(c.delta);
  j["n_agents"] = c.n_agents;
  j["n_clusters"] = c.n_clusters;
  j["sigma0"] = round_6sig(c.sigma0);
  j["tau"] = c.tau;
  j["compression_ratio"] = round_6sig(c.compression_ratio);
  j["batch_size"] = c.batch_size;
  j["epochs"] = c.epochs;
  j["clip_norm"] = round_6sig(c.clip_norm);
  j["learning_rate"] = round_6sig(c.learning_rate);
  j["seed"] = c.seed;
  j["sigma_global"] = round_6sig(c.sigma_global);
  j["ablation"] = ablation_names(c.ablation);
  j["agg_mode"] = to_string(c.agg_mode);
  if (c.epsilon_total) {
    j["epsilon_total"] = round_6sig(*c.epsilon_total);
  } else {
    j["epsilon_total"] = nullptr;
  }
  if (c.delta_total) {
    j["delta_total"] = round_6sig(*c.delta_total);
  } else {
    j["delta_total"] = nullptr;
  }
  return j;
}

TrainingConfig config_from_json(const ordered_json& j) {
  TrainingConfig c;
  c.epsilon_per_round = j.at("epsilon_per_round").get<double>();
  c.delta = j.at("delta").get<double>();
  c.n_agents = j.at("n_agents").get<int>();
  c.n_clusters = j.at("n_clusters").get<int>();
  c.sigma0 = j.at("sigma0").get<double>();
  c.tau = j.at("tau").get<int>();
  c.compression_ratio = j.at("compression_ratio").get<double>();
  c.batch_size = j.at("batch_size").get<int>();
  c.epochs = j.at("epochs").get<int>();
  c.clip_norm = j.at("clip_norm").get<double>();
  c.learning_rate = j.at("learning_rate").get<double>();
  c.seed = j.at("seed").get<std::uint64_t>();
  c.sigma_global = j.at("sigma_global").get<double>();
  c.ablation = ablation_from_names(j.at("ablation").get<std::vector<std::string>>());
  c.agg_mode = aggregation_mode_from_string(j.at("agg_mode").get<std::string>());
  if (!j.at("epsilon_total").is_null()) c.epsilon_total = j.at("epsilon_total").get<double>();
  if (!j.at("delta_total").is_null()) c.delta_total = j.at("delta_total").get<double>();
  return c;
}

std::string render_json(std::span<const ExperimentResult> results) {
  ordered_json arr = ordered_json::array();
  for (const auto& r : results) {
    ordered_json j;
    j["variant"] = variant_name(r.config);
    j["config"] = config_to_json(r.config);
    j["final_train_accuracy"] = round_6sig(r.final_train_accuracy);
    j["final_test_accuracy"] = round_6sig(r.final_test_accuracy);
    ordered_json curve = ordered_json::array();
    for (double a : r.accuracy_per_epoch) curve.push_back(round_6sig(a));
    j["accuracy_per_epoch"] = std::move(curve);
    j["epsilon_spent"] = round_6sig(r.epsilon_spent);
    ordered_json ledger;
    ledger["epsilon_total"] = round_6sig(r.epsilon_budget);
    ledger["delta_total"] = round_6sig(r.delta_budget);
    ledger["epsilon_spent"] = round_6sig(r.epsilon_spent);
    ledger["delta_spent"] = round_6sig(r.delta_spent);
    ledger["rounds_recorded"] = r.rounds_completed;
    j["ledger"] = std::move(ledger);
    j["wall_time_seconds"] = round_6sig(r.wall_time_seconds);
    j["bytes_transmitted_total"] = r.bytes_transmitted_total;
    j["rounds_completed"] = r.rounds_completed;
    j["epochs_completed"] = r.epochs_completed;
    j["budget_exhausted"] = r.budget_exhausted;
    arr.push_back(std::move(j));
  }
  return arr.dump(2) + "\n";
}

}  // namespace

std::string render_report(std::span<const ExperimentResult> results, ReportFormat format) {
  return format == ReportFormat::kCsv ? render_csv(results) : render_json(results);
}

void write_report(std::span<const ExperimentResult> results, ReportFormat format,
                  std::ostream& out) {
  out << render_report(results, format);
}

void emit_report(std::span<const ExperimentResult> results, ReportFormat format,
                 const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open report file " + path.string());
  write_report(results, format, out);
  out.flush();
  if (!out) throw IoError("failed writing report file " + path.string());
}

std::vector<ExperimentResult> parse_json_report(const std::string& text) {
  ordered_json arr;
  try {
    arr = ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw CodecError(std::string("malformed JSON report: ") + e.what());
  }
  if (!arr.is_array()) throw CodecError("JSON report must be an array");

  std::vector<ExperimentResult> results;
  results.reserve(arr.size());
  for (const auto& j : arr) {
    ExperimentResult r;
    r.config = config_from_json(j.at("config"));
    r.final_train_accuracy = j.at("final_train_accuracy").get<double>();
    r.final_test_accuracy = j.at("final_test_accuracy").get<double>();
    r.accuracy_per_epoch = j.at("accuracy_per_epoch").get<std::vector<double>>();
    r.epsilon_spent = j.at("epsilon_spent").get<double>();
    const auto& ledger = j.at("ledger");
    r.delta_spent = ledger.at("delta_spent").get<double>();
    r.epsilon_budget = ledger.at("epsilon_total").get<double>();
    r.delta_budget = ledger.at("delta_total").get<double>();
    r.wall_time_seconds = j.at("wall_time_seconds").get<double>();
    r.bytes_transmitted_total = j.at("bytes_transmitted_total").get<std::uint64_t>();
    r.rounds_completed = j.at("rounds_completed").get<std::uint64_t>();
    r.epochs_completed = j.at("epochs_completed").get<std::uint64_t>();
    r.budget_exhausted = j.at("budget_exhausted").get<bool>();
    results.push_back(std::move(r));
  }
  return results;
}

}  // namespace sdp
