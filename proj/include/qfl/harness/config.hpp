// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "qfl/data/pipeline.hpp"
#include "qfl/fed/federation.hpp"
#include "qfl/qlstm/model.hpp"
#include "qfl/qlstm/trainer.hpp"
#include "qfl/threat/dp.hpp"
#include "qfl/threat/poison.hpp"

namespace qfl::harness {

/// none: configured aggregation. dp: configured aggregation plus clipped
/// Gaussian noise on the server update. fedransel: forces FedRansel aggregation.
enum class Defense { None, Dp, FedRansel };

Defense parse_defense(const std::string& name);
const char* defense_name(Defense d);

struct AttackConfig {
  threat::PoisonConfig poison;
  Defense defense = Defense::None;
  threat::DPConfig dp;
  bool membership_inference = false;
};

struct SweepSpec {
  std::string param;  // n_qubits, depth, seq_len or n_nodes
  std::vector<int> values;

  void validate() const;
};

struct ExperimentConfig {
  lstm::ModelConfig model;            // input_dim is filled from the prepared data
  bool match_qlstm_params = false;    // lstm only: pick hidden_dim to match the QLSTM size
  lstm::TrainOptions training;
  fed::FederationConfig federation;   // seed is overwritten per run
  bool shared_init = true;            // every node starts from the same initial model
  data::DataConfig data;
  AttackConfig attack;
  std::optional<SweepSpec> sweep;
  std::vector<std::uint64_t> seeds{0};
  std::string output_dir = "out";
  int workers = 1;

  void validate() const;
  nlohmann::json to_json() const;
  static ExperimentConfig from_json(const nlohmann::json& j);
  static ExperimentConfig load(const std::filesystem::path& path);

  fed::Aggregation effective_aggregation() const;
  /// Model config for a given input width, with the matched LSTM hidden size applied.
  lstm::ModelConfig resolved_model(int input_dim) const;
};

/// Sets `param` in a copy of `base`.
ExperimentConfig with_sweep_value(const ExperimentConfig& base, const std::string& param, int value);

}  // namespace qfl::harness
