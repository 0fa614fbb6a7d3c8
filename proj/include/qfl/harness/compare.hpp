// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "qfl/harness/config.hpp"
#include "qfl/harness/experiment.hpp"
#include "qfl/threat/degradation.hpp"

namespace qfl::harness {

std::map<std::string, double> headline(const Summary& s);

/// Clean and attacked runs of one configuration over all seeds. The clean twin
/// is the same config with poisoning disabled; without poisoning configured the
/// attacked side reuses the clean runs.
struct AttackOutcome {
  std::vector<RunResult> clean;
  std::vector<RunResult> attacked;
  Summary clean_summary;
  Summary attacked_summary;
  std::vector<threat::DegradationRow> degradation;  // from the summary means
  /// Same comparison restricted to nodes outside the malicious set, on both sides.
  Summary clean_honest_summary;
  Summary attacked_honest_summary;
  std::vector<threat::DegradationRow> honest_degradation;
};

/// Copies of `runs` whose mean metrics cover only nodes not in `exclude`.
std::vector<RunResult> restrict_to_nodes(const std::vector<RunResult>& runs, const std::set<int>& exclude);

AttackOutcome evaluate_attack(const ExperimentConfig& cfg);

/// Writes degradation.csv, inference.json (when membership inference is on)
/// and results.json.
AttackOutcome attack_eval_to(const ExperimentConfig& cfg, const std::filesystem::path& out_dir);

struct CompareRow {
  std::string model;    // qlstm or lstm
  std::string defense;  // none (FedAvg), fedransel, dp (FedAvg + DP)
  AttackOutcome outcome;
};

/// {qlstm, lstm} x {none, fedransel, dp} on shared data config and seeds. The
/// LSTM is sized to match the QLSTM parameter count.
std::vector<CompareRow> compare_models(const ExperimentConfig& cfg);

/// model,defense,accuracy,recall,auc (clean means)
std::string comparison_csv(const std::vector<CompareRow>& rows);
/// model,defense,metric,clean,attacked,pct_change
std::string compare_degradation_csv(const std::vector<CompareRow>& rows);

/// Writes comparison.csv, degradation.csv and results.json.
std::vector<CompareRow> compare_to(const ExperimentConfig& cfg, const std::filesystem::path& out_dir);

}  // namespace qfl::harness
