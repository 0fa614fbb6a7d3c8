// SPDX-License-Identifier: Apache-2.0
#include "qfl/nn/linear.hpp"

#include <algorithm>

#include "qfl/common/error.hpp"

namespace qfl::nn {

Linear::Linear(ParamStore& store, const std::string& component, int in_dim, int out_dim)
    : in_dim_(in_dim), out_dim_(out_dim) {
  if (in_dim <= 0 || out_dim <= 0) throw ConfigError("linear layer dimensions must be positive");
  weight_ = store.add_tensor(component, "weight", static_cast<std::size_t>(in_dim) * out_dim);
  bias_ = store.add_tensor(component, "bias", static_cast<std::size_t>(out_dim));
}

void Linear::init(ParamStore& store, Rng& rng) const {
  const double bound = 1.0 / std::sqrt(static_cast<double>(in_dim_));
  for (double& w : store.values(weight_)) w = uniform(rng, -bound, bound);
  for (double& b : store.values(bias_)) b = 0.0;
}

void Linear::set_identity(ParamStore& store) const {
  auto w = store.values(weight_);
  std::fill(w.begin(), w.end(), 0.0);
  for (int i = 0; i < std::min(in_dim_, out_dim_); ++i) w[static_cast<std::size_t>(i) * in_dim_ + i] = 1.0;
  for (double& b : store.values(bias_)) b = 0.0;
}

void Linear::forward(const ParamStore& store, std::span<const double> x, std::span<double> y) const {
  if (x.size() != static_cast<std::size_t>(in_dim_) || y.size() != static_cast<std::size_t>(out_dim_)) {
    throw ShapeError("linear layer expects " + std::to_string(in_dim_) + " -> " +
                     std::to_string(out_dim_) + ", got " + std::to_string(x.size()) + " -> " +
                     std::to_string(y.size()));
  }
  const auto w = store.values(weight_);
  const auto b = store.values(bias_);
  for (int o = 0; o < out_dim_; ++o) {
    double acc = b[o];
    const double* row = w.data() + static_cast<std::size_t>(o) * in_dim_;
    for (int i = 0; i < in_dim_; ++i) acc += row[i] * x[i];
    y[o] = acc;
  }
}

void Linear::backward(const ParamStore& store, std::span<const double> x,
                      std::span<const double> dy, std::span<double> grad,
                      std::span<double> dx) const {
  if (x.size() != static_cast<std::size_t>(in_dim_) || dy.size() != static_cast<std::size_t>(out_dim_)) {
    throw ShapeError("linear backward shape mismatch");
  }
  if (grad.size() != store.size()) throw ShapeError("gradient buffer must span the whole store");
  const auto w = store.values(weight_);
  for (int o = 0; o < out_dim_; ++o) {
    const double g = dy[o];
    double* gw = grad.data() + weight_.offset + static_cast<std::size_t>(o) * in_dim_;
    for (int i = 0; i < in_dim_; ++i) gw[i] += g * x[i];
    grad[bias_.offset + o] += g;
  }
  if (!dx.empty()) {
    if (dx.size() != static_cast<std::size_t>(in_dim_)) throw ShapeError("dx has wrong length");
    std::fill(dx.begin(), dx.end(), 0.0);
    for (int o = 0; o < out_dim_; ++o) {
      const double* row = w.data() + static_cast<std::size_t>(o) * in_dim_;
      for (int i = 0; i < in_dim_; ++i) dx[i] += row[i] * dy[o];
    }
  }
}

}  // namespace qfl::nn
