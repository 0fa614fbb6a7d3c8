// SPDX-License-Identifier: Apache-2.0
#include "qfl/nn/loss.hpp"

#include <cmath>

#include "qfl/common/error.hpp"
#include "qfl/nn/linear.hpp"

namespace qfl::nn {

double bce_single(double z, int y) {
  return std::max(z, 0.0) - z * y + std::log1p(std::exp(-std::abs(z)));
}

LossValue bce_with_logits(std::span<const double> logits, std::span<const int> labels) {
  if (logits.empty()) throw ConfigError("empty batch");
  if (logits.size() != labels.size()) throw ShapeError("logits and labels differ in length");
  const double m = static_cast<double>(logits.size());
  LossValue out;
  out.grad.resize(logits.size());
  double total = 0.0;
  for (std::size_t j = 0; j < logits.size(); ++j) {
    const int y = labels[j];
    if (y != 0 && y != 1) throw ConfigError("labels must be 0 or 1");
    if (!std::isfinite(logits[j])) throw DivergenceError("non-finite logit");
    total += bce_single(logits[j], y);
    out.grad[j] = (sigmoid(logits[j]) - y) / m;
  }
  out.value = total / m;
  return out;
}

}  // namespace qfl::nn
