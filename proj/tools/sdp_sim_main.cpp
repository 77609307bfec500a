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

#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sdp/harness.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfigError = 1;
constexpr int kExitIoError = 2;

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hierarchical differentially private gradient-aggregation simulator"};
  app.require_subcommand(1);
  // Options live on the top-level app so a flat key = value config file
  // addresses them directly; subcommand arguments fall through to them.
  app.fallthrough();
  app.allow_config_extras(CLI::config_extras_mode::error);
  app.set_config("--config", "", "Flat key = value configuration file");

  sdp::TrainingConfig config;
  std::vector<std::string> ablation;
  std::string agg_mode = "weighted_mean";
  std::string out;
  std::string format = "csv";

  app.add_option("--epsilon", config.epsilon_per_round, "Per-round privacy budget epsilon");
  app.add_option("--delta", config.delta, "Per-round privacy parameter delta");
  app.add_option("--agents", config.n_agents, "Number of learning agents");
  app.add_option("--clusters", config.n_clusters, "Number of agent clusters");
  app.add_option("--sigma0", config.sigma0, "Base noise standard deviation");
  app.add_option("--tau", config.tau, "Noise decay horizon in epochs");
  app.add_option("--ratio", config.compression_ratio, "Fraction of gradient coordinates kept");
  app.add_option("--batch", config.batch_size, "Per-agent batch size");
  app.add_option("--epochs", config.epochs, "Training epochs");
  app.add_option("--clip", config.clip_norm, "Gradient L2 clip norm");
  app.add_option("--lr", config.learning_rate, "Learning rate");
  app.add_option("--seed", config.seed, "Run seed (unsigned 64-bit)");
  app.add_option("--ablation", ablation,
                 "Components to disable: no_scheduler,no_compression,no_hierarchy")
      ->delimiter(',');
  app.add_option("--agg-mode", agg_mode, "Global aggregation mode")
      ->check(CLI::IsMember({"weighted_mean", "paper_sum"}));
  app.add_option("--out", out, "Report output path (stdout when omitted)");
  app.add_option("--format", format, "Report format")
      ->check(CLI::IsMember({"csv", "json"}));

  CLI::App* run_cmd = app.add_subcommand("run", "Run a single experiment");
  CLI::App* ablate_cmd = app.add_subcommand("ablate", "Run the four-variant ablation grid");
  (void)ablate_cmd;

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfigError;
  }

  try {
    config.ablation = sdp::ablation_from_names(ablation);
    config.agg_mode = sdp::aggregation_mode_from_string(agg_mode);

    std::vector<sdp::ExperimentResult> results;
    if (run_cmd->parsed()) {
      results.push_back(sdp::run_experiment(config));
    } else {
      results = sdp::run_ablation_grid(config);
    }

    const auto report_format = sdp::report_format_from_string(format);
    if (out.empty()) {
      sdp::write_report(results, report_format, std::cout);
    } else {
      sdp::emit_report(results, report_format, out);
    }
    return kExitOk;
  } catch (const sdp::IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIoError;
  } catch (const sdp::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfigError;
  }
}
