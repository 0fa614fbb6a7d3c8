// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qfl/common/rng.hpp"
#include "qfl/data/dataset.hpp"

namespace qfl::data {

/// Per-feature (x - mean) / std with the population std. Features whose std is
/// below 1e-12 map to 0.
struct StandardScaler {
  Eigen::VectorXd mean;
  Eigen::VectorXd std;

  static StandardScaler fit(const Eigen::MatrixXd& x);
  Eigen::MatrixXd transform(const Eigen::MatrixXd& x) const;
};

std::pair<Eigen::MatrixXd, StandardScaler> standard_scale(const Eigen::MatrixXd& x);

/// Expands categorical columns into indicator columns over a vocabulary fitted
/// on the given rows (sorted lexicographically). Categories not in the
/// vocabulary encode as all zeros. Numeric columns pass through in place.
struct OneHotEncoder {
  struct Column {
    std::size_t source = 0;
    std::vector<std::string> vocab;
  };
  std::vector<Column> columns;  // categorical columns only
  int input_width = 0;

  static OneHotEncoder fit(const TabularDataset& data, std::span<const std::size_t> rows);
  int output_width() const;
  Eigen::MatrixXd transform(const TabularDataset& data) const;
  std::vector<std::string> output_names(const TabularDataset& data) const;
};

/// Keeps every minority row and a uniform random subset of the majority class of
/// equal size. Returned indices are ascending. Throws ConfigError if a class is absent.
std::vector<std::size_t> undersample_indices(std::span<const int> labels, Rng& rng);
TabularDataset undersample(const TabularDataset& data, Rng& rng);

}  // namespace qfl::data
