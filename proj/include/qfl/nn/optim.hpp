// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>

#include "qfl/nn/param_store.hpp"

namespace qfl::nn {

enum class OptimizerKind { Adam, Sgd };

OptimizerKind parse_optimizer(const std::string& name);
const char* optimizer_name(OptimizerKind k);

struct AdamOptions {
  double lr = 0.01;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

/// p <- p - lr * g, then clears gradients. Throws DivergenceError on non-finite gradients.
void sgd_step(ParamStore& store, double lr);

/// Bias-corrected Adam; increments the store's step counter and clears gradients.
void adam_step(ParamStore& store, const AdamOptions& opts);

struct OptimizerConfig {
  OptimizerKind kind = OptimizerKind::Adam;
  double lr = 0.01;
};

void optimizer_step(ParamStore& store, const OptimizerConfig& cfg);

}  // namespace qfl::nn
