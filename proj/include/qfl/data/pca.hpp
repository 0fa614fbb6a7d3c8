// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <utility>

namespace qfl::data {

/// Principal components of the sample covariance (divisor N - 1).
struct PcaModel {
  Eigen::VectorXd mean;                // d
  Eigen::MatrixXd components;          // d x k, orthonormal columns
  Eigen::VectorXd explained_variance;  // k, non-increasing
  double total_variance = 0.0;         // trace of the covariance

  int n_components() const { return static_cast<int>(components.cols()); }
  Eigen::VectorXd explained_variance_ratio() const;

  Eigen::MatrixXd transform(const Eigen::MatrixXd& x) const;
  Eigen::MatrixXd inverse_transform(const Eigen::MatrixXd& z) const;
};

/// Requires k <= d and N > k. Each component's sign is fixed so its
/// largest-magnitude loading is positive.
PcaModel fit_pca(const Eigen::MatrixXd& x, int k);

std::pair<PcaModel, Eigen::MatrixXd> pca_fit_transform(const Eigen::MatrixXd& x, int k);

}  // namespace qfl::data
