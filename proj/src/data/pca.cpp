// SPDX-License-Identifier: Apache-2.0
#include "qfl/data/pca.hpp"

#include <string>

#include "qfl/common/error.hpp"

namespace qfl::data {

Eigen::VectorXd PcaModel::explained_variance_ratio() const {
  if (total_variance <= 0) return Eigen::VectorXd::Zero(explained_variance.size());
  return explained_variance / total_variance;
}

Eigen::MatrixXd PcaModel::transform(const Eigen::MatrixXd& x) const {
  if (x.cols() != mean.size()) throw ShapeError("PCA input width mismatch");
  return (x.rowwise() - mean.transpose()) * components;
}

Eigen::MatrixXd PcaModel::inverse_transform(const Eigen::MatrixXd& z) const {
  if (z.cols() != components.cols()) throw ShapeError("PCA code width mismatch");
  return (z * components.transpose()).rowwise() + mean.transpose();
}

PcaModel fit_pca(const Eigen::MatrixXd& x, int k) {
  const auto n = x.rows();
  const auto d = x.cols();
  if (k < 1 || k > d) {
    throw ConfigError("PCA components " + std::to_string(k) + " must lie in [1, " + std::to_string(d) + "]");
  }
  if (n <= k) throw ConfigError("PCA needs more samples than components");

  PcaModel m;
  m.mean = x.colwise().mean();
  const Eigen::MatrixXd centered = x.rowwise() - m.mean.transpose();
  const Eigen::MatrixXd cov = (centered.transpose() * centered) / static_cast<double>(n - 1);
  m.total_variance = cov.trace();

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
  if (solver.info() != Eigen::Success) throw Error("covariance eigendecomposition failed");
  // Eigen returns ascending eigenvalues; take the top k in descending order.
  m.components.resize(d, k);
  m.explained_variance.resize(k);
  for (int c = 0; c < k; ++c) {
    const auto src = d - 1 - c;
    Eigen::VectorXd v = solver.eigenvectors().col(src);
    Eigen::Index arg;
    v.cwiseAbs().maxCoeff(&arg);
    if (v(arg) < 0) v = -v;
    m.components.col(c) = v;
    m.explained_variance(c) = std::max(0.0, solver.eigenvalues()(src));
  }
  return m;
}

std::pair<PcaModel, Eigen::MatrixXd> pca_fit_transform(const Eigen::MatrixXd& x, int k) {
  PcaModel m = fit_pca(x, k);
  Eigen::MatrixXd z = m.transform(x);
  return {std::move(m), std::move(z)};
}

}  // namespace qfl::data
