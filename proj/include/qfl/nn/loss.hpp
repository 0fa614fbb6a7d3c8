// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>
#include <vector>

namespace qfl::nn {

struct LossValue {
  double value = 0.0;
  /// dL/dlogit_j = (sigmoid(logit_j) - y_j) / m
  std::vector<double> grad;
};

/// Mean binary cross-entropy on sigmoid(logits), evaluated in the stable form
/// max(z, 0) - z y + log(1 + exp(-|z|)).
LossValue bce_with_logits(std::span<const double> logits, std::span<const int> labels);

/// Per-sample loss, same formula without the 1/m.
double bce_single(double logit, int label);

}  // namespace qfl::nn
