// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "qfl/fed/federation.hpp"
#include "qfl/harness/config.hpp"
#include "qfl/harness/metrics.hpp"
#include "qfl/threat/inference.hpp"

namespace qfl::harness {

struct InferenceOutcome {
  int victim = 0;
  /// Attack on the model the server can rebuild from the victim's last shared
  /// values; unshared entries take the other nodes' mean, or 0 if nobody sent them.
  threat::InferenceReport observed;
  /// Attack on the victim's actual final local model.
  threat::InferenceReport local;
};

struct RunResult {
  std::uint64_t seed = 0;
  bool ok = false;
  std::string error;
  int input_dim = 0;
  std::size_t n_test = 0;
  std::vector<std::size_t> shard_sizes;
  int hidden_dim = 0;
  std::size_t param_count = 0;
  fed::Aggregation aggregation = fed::Aggregation::FedRansel;
  std::vector<fed::RoundRecord> rounds;
  std::vector<MetricSet> node_metrics;  // final round, per node
  MetricSet mean;                       // over node_metrics
  std::optional<InferenceOutcome> inference;
};

using RoundSink = std::function<void(std::uint64_t seed, const fed::RoundRecord&)>;

/// One seed end to end. Failures are captured in the result rather than thrown.
RunResult run_single(const ExperimentConfig& cfg, std::uint64_t seed, const RoundSink& sink = {});

nlohmann::json run_result_to_json(const RunResult& r);

struct Summary {
  std::size_t runs = 0;
  std::size_t failures = 0;
  double accuracy_mean = 0, accuracy_std = 0;
  double recall_mean = 0, recall_std = 0;
  double auc_mean = 0, auc_std = 0;
};

/// Mean and sample standard deviation (0 for one run) over successful runs.
Summary summarize_runs(const std::vector<RunResult>& runs);
nlohmann::json summary_to_json(const Summary& s);

struct ExperimentResult {
  std::vector<RunResult> runs;
  Summary summary;
};

/// Runs every configured seed and writes <out>/results.json and
/// <out>/round_log.jsonl. Round lines are written as rounds finish; if a run
/// fails, results.json is still written and an Error is thrown afterwards.
ExperimentResult run_experiment(const ExperimentConfig& cfg, const std::filesystem::path& out_dir,
                                const std::string& command = "train");

/// The config as recorded in result files: everything that affects results,
/// nothing that does not (output directory, worker count).
nlohmann::json result_config_json(const ExperimentConfig& cfg);

/// Serializes `j` with a trailing newline.
void write_json(const std::filesystem::path& path, const nlohmann::json& j);
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace qfl::harness
