// SPDX-License-Identifier: Apache-2.0
#include "qfl/data/synth.hpp"

#include <cmath>
#include <random>
#include <string>

#include "qfl/common/error.hpp"

namespace qfl::data {

TabularDataset synth_generate(const SynthOptions& opts, Rng& rng) {
  const int d = opts.n_features;
  const int w = opts.window;
  if (d < 2) throw ConfigError("synthetic data needs at least 2 features");
  if (w < 1) throw ConfigError("synthetic window must be positive");
  if (opts.signal < 0 || !std::isfinite(opts.signal)) throw ConfigError("signal strength must be finite and >= 0");
  if (opts.n_samples == 0) throw ConfigError("n_samples must be positive");

  std::normal_distribution<double> normal(0.0, 1.0);
  const double sqrt_d = std::sqrt(static_cast<double>(d));

  Eigen::MatrixXd mix(d, d);
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c) mix(r, c) = (r == c ? 1.0 : 0.0) + 0.5 * normal(rng) / sqrt_d;
  for (int c = 0; c < d; ++c) mix.col(c) *= std::exp(0.5 * normal(rng));

  Eigen::VectorXd u(d);
  for (int j = 0; j < d; ++j) u(j) = normal(rng);
  u /= u.norm();

  const std::size_t total = opts.n_samples + static_cast<std::size_t>(w - 1);
  Eigen::MatrixXd latent(static_cast<Eigen::Index>(total), d);
  for (Eigen::Index r = 0; r < latent.rows(); ++r)
    for (int c = 0; c < d; ++c) latent(r, c) = normal(rng);
  const Eigen::VectorXd proj = latent * u;

  TabularDataset out;
  out.features.resize(static_cast<Eigen::Index>(opts.n_samples), d);
  out.labels.resize(opts.n_samples);
  const double inv_sqrt_w = 1.0 / std::sqrt(static_cast<double>(w));
  for (std::size_t t = 0; t < opts.n_samples; ++t) {
    const auto row = static_cast<Eigen::Index>(t + static_cast<std::size_t>(w - 1));
    out.features.row(static_cast<Eigen::Index>(t)) = (mix * latent.row(row).transpose()).transpose();
    double score = 0.0;
    for (int j = 0; j < w; ++j) score += proj(row - j);
    score *= inv_sqrt_w;
    out.labels[t] = opts.signal * score + normal(rng) > 0 ? 1 : 0;
  }
  for (int c = 0; c < d; ++c) out.columns.push_back({"f" + std::to_string(c), false, {}});
  return out;
}

}  // namespace qfl::data
