// SPDX-License-Identifier: Apache-2.0
#include "qfl/data/dataset.hpp"

#include <cmath>

#include "qfl/common/error.hpp"

namespace qfl::data {

void TabularDataset::validate() const {
  if (features.rows() != static_cast<Eigen::Index>(labels.size())) {
    throw DataError("feature rows and label count differ");
  }
  if (!columns.empty() && columns.size() != static_cast<std::size_t>(features.cols())) {
    throw DataError("column metadata does not match feature width");
  }
  for (int y : labels) {
    if (y != 0 && y != 1) throw DataError("labels must be 0 or 1");
  }
  if (!features.allFinite()) throw DataError("dataset contains non-finite values");
}

Eigen::MatrixXd select_rows(const Eigen::MatrixXd& m, std::span<const std::size_t> rows) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(rows.size()), m.cols());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r] >= static_cast<std::size_t>(m.rows())) throw IndexError("row index out of range");
    out.row(static_cast<Eigen::Index>(r)) = m.row(static_cast<Eigen::Index>(rows[r]));
  }
  return out;
}

TabularDataset TabularDataset::select_rows(std::span<const std::size_t> rows) const {
  TabularDataset out;
  out.features = data::select_rows(features, rows);
  out.labels.reserve(rows.size());
  for (std::size_t r : rows) out.labels.push_back(labels[r]);
  out.columns = columns;
  return out;
}

}  // namespace qfl::data
