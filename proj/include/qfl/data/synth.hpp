// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "qfl/common/rng.hpp"
#include "qfl/data/dataset.hpp"

namespace qfl::data {

/// Generative recipe, per row t:
///   g_t ~ N(0, I_d)                          latent factors
///   x_t = (I + 0.5 R / sqrt(d)) diag(s) g_t   R_ij ~ N(0,1), log s_j ~ N(0, 0.5^2)
///   score_t = sum_{j<W} u . g_{t-j} / sqrt(W) u a random unit vector
///   y_t = 1[signal * score_t + e_t > 0]       e_t ~ N(0, 1)
/// The label of row t depends on the last W rows, so windowed models see signal
/// a per-row model cannot fully recover. signal = 0 makes labels pure noise.
/// The first W - 1 latent rows are burn-in and not emitted.
struct SynthOptions {
  std::size_t n_samples = 2000;
  int n_features = 30;
  double signal = 8.0;
  int window = 3;
};

TabularDataset synth_generate(const SynthOptions& opts, Rng& rng);

}  // namespace qfl::data
