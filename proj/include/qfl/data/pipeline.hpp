// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "qfl/data/pca.hpp"
#include "qfl/data/preprocess.hpp"
#include "qfl/data/split.hpp"
#include "qfl/data/synth.hpp"
#include "qfl/qlstm/sequence.hpp"

namespace qfl::data {

enum class DataSource { Synthetic, Csv };

/// Steps run in this order: [under-sample] -> [shuffle rows] -> window -> split
/// -> [one-hot] -> [PCA] -> [scale]. Every fitted statistic comes from the rows
/// that end a training window.
struct DataConfig {
  DataSource source = DataSource::Synthetic;
  std::string preset = "synthetic";
  SynthOptions synth;
  std::string csv_path;
  std::string schema_path;
  double train_ratio = 2.0 / 3.0;
  bool undersample = false;
  bool shuffle_rows = false;
  bool one_hot = true;
  int pca_components = 0;  // 0 disables PCA
  bool scale = true;
  std::string cache_path;  // optional prepared-data cache to reuse

  void validate() const;
  nlohmann::json to_json() const;
  static DataConfig from_json(const nlohmann::json& j);
};

/// Presets: "synthetic" (scale), "dataset1" (shuffle, PCA 28, scale),
/// "dataset2" (under-sample, one-hot, scale). Throws ConfigError on unknown names.
void apply_preset(DataConfig& cfg, const std::string& preset);

struct PreparedData {
  std::uint64_t key = 0;
  int seq_len = 0;
  int n_clients = 0;
  std::vector<std::string> feature_names;
  Eigen::MatrixXd rows;             // transformed, one per source row after resampling
  std::vector<int> row_labels;
  std::vector<std::size_t> window_ends;  // row index closing each window
  SplitPlan split;                  // indices into window_ends
  std::optional<OneHotEncoder> encoder;
  std::optional<PcaModel> pca;
  std::optional<StandardScaler> scaler;

  int input_dim() const { return static_cast<int>(rows.cols()); }
  lstm::SequenceSet windows(const std::vector<std::size_t>& which) const;
  lstm::SequenceSet test_set() const { return windows(split.test); }
  lstm::SequenceSet shard(int k) const { return windows(split.clients.at(static_cast<std::size_t>(k))); }
  lstm::SequenceSet train_set() const { return windows(split.train); }
};

std::uint64_t prepared_key(const DataConfig& cfg, int seq_len, int n_clients, std::uint64_t seed);

PreparedData prepare_data(const DataConfig& cfg, int seq_len, int n_clients, std::uint64_t seed);

/// Cache container: JSON {"format": "qfl-data/1", "key": "<hex>", ...}.
nlohmann::json prepared_to_json(const PreparedData& p);
PreparedData prepared_from_json(const nlohmann::json& j);
void save_prepared(const PreparedData& p, const std::filesystem::path& path);
/// Throws DataError if the file is unreadable or its key differs from `expected_key`.
PreparedData load_prepared(const std::filesystem::path& path, std::uint64_t expected_key);

/// Uses cfg.cache_path when it holds a matching cache, otherwise prepares from scratch.
PreparedData prepare_or_load(const DataConfig& cfg, int seq_len, int n_clients, std::uint64_t seed);

}  // namespace qfl::data
