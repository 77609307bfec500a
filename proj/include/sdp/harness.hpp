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

#include <filesystem>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "sdp/core.hpp"
#include "sdp/hierarchy.hpp"

namespace sdp {

/// Synthetic binary-classification task the simulator trains on.
struct TaskSpec {
  int dim = 10;
  int n_rows = 2000;
  double separation = 4.0;
};

/// Harness knobs that do not affect results: execution policy (parallel and
/// serial are bitwise identical) and the optional per-round trace dump.
struct RunOptions {
  AgentExecution exec = AgentExecution::kParallel;
  std::optional<std::filesystem::path> trace_dir;
};

/// Outcome of one training experiment.
struct ExperimentResult {
  TrainingConfig config;
  double final_train_accuracy = 0.0;
  double final_test_accuracy = 0.0;
  std::vector<double> accuracy_per_epoch;  // train accuracy after each epoch
  double epsilon_spent = 0.0;
  double delta_spent = 0.0;
  double epsilon_budget = 0.0;  // effective lifetime totals the ledger ran with
  double delta_budget = 0.0;
  double wall_time_seconds = 0.0;
  std::uint64_t bytes_transmitted_total = 0;
  std::uint64_t rounds_completed = 0;
  std::uint64_t epochs_completed = 0;
  bool budget_exhausted = false;
};

enum class ReportFormat { kCsv, kJson };

ReportFormat report_format_from_string(const std::string& name);

/// "full", or the active ablations joined with '+'.
std::string variant_name(const TrainingConfig& config);

/// Rounds needed to complete `epochs` epochs over `total_rows` training rows.
std::uint64_t planned_rounds(int epochs, int batch_size, int n_agents,
                             std::size_t total_rows);

/// Run one experiment: generate the task from config.seed, split 80/20,
/// shard the training rows across agents, and run rounds until the epoch
/// budget completes or the privacy budget runs out (the latter truncates the
/// run and is reported in-result, not thrown). Ablation flags map to:
/// no_scheduler -> constant noise at sigma0, no_compression -> ratio 1.0,
/// no_hierarchy -> one cluster.
ExperimentResult run_experiment(const TrainingConfig& config, const TaskSpec& task = {},
                                const RunOptions& options = {});

/// The four-variant grid: full, no_scheduler, no_compression, no_hierarchy,
/// all from the same seed (hence the same dataset), in that order.
std::vector<ExperimentResult> run_ablation_grid(const TrainingConfig& config,
                                                const TaskSpec& task = {},
                                                const RunOptions& options = {});

/// Render results in the requested format. Reals carry 6 significant digits;
/// field order is fixed.
std::string render_report(std::span<const ExperimentResult> results, ReportFormat format);

void write_report(std::span<const ExperimentResult> results, ReportFormat format,
                  std::ostream& out);

/// Write the rendered report to `path`; failures surface as IoError carrying
/// the path.
void emit_report(std::span<const ExperimentResult> results, ReportFormat format,
                 const std::filesystem::path& path);

/// Parse a JSON report produced by render_report.
std::vector<ExperimentResult> parse_json_report(const std::string& text);

/// Round a real to 6 significant digits, matching the report rendering.
double round_6sig(double v);

/// File name of the trace dump for one round ("round-00012.bin").
std::string trace_file_name(std::size_t round);

}  // namespace sdp
