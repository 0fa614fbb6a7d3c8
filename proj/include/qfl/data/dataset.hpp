// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <span>
#include <string>
#include <vector>

namespace qfl::data {

struct FeatureInfo {
  std::string name;
  bool categorical = false;
  /// For categorical columns the feature cell holds an index into this list.
  std::vector<std::string> categories;
};

/// N x d features with binary labels. Categorical columns hold category codes
/// until one-hot encoding widens them.
struct TabularDataset {
  Eigen::MatrixXd features;
  std::vector<int> labels;
  std::vector<FeatureInfo> columns;

  std::size_t size() const { return labels.size(); }
  int dim() const { return static_cast<int>(features.cols()); }

  /// Throws DataError on shape mismatch, non-binary labels or non-finite values.
  void validate() const;

  TabularDataset select_rows(std::span<const std::size_t> rows) const;
};

Eigen::MatrixXd select_rows(const Eigen::MatrixXd& m, std::span<const std::size_t> rows);

}  // namespace qfl::data
