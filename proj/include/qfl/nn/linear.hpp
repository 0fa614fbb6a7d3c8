// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <span>
#include <string>

#include "qfl/common/rng.hpp"
#include "qfl/nn/param_store.hpp"

namespace qfl::nn {

/// y = W x + b with W stored row-major (out_dim x in_dim) under "<component>/weight"
/// and b under "<component>/bias". The layer holds offsets only; values live in
/// the ParamStore passed to each call.
class Linear {
 public:
  Linear() = default;
  Linear(ParamStore& store, const std::string& component, int in_dim, int out_dim);

  int in_dim() const { return in_dim_; }
  int out_dim() const { return out_dim_; }
  TensorRef weight() const { return weight_; }
  TensorRef bias() const { return bias_; }
  std::size_t param_count() const { return weight_.size + bias_.size; }

  /// Weights uniform in +-1/sqrt(in_dim), bias zero.
  void init(ParamStore& store, Rng& rng) const;
  void set_identity(ParamStore& store) const;

  void forward(const ParamStore& store, std::span<const double> x, std::span<double> y) const;

  /// Accumulates dL/dW, dL/db into `grad` (indexed like the whole store) and
  /// writes dL/dx into `dx` when it is non-empty.
  void backward(const ParamStore& store, std::span<const double> x, std::span<const double> dy,
                std::span<double> grad, std::span<double> dx) const;

 private:
  int in_dim_ = 0;
  int out_dim_ = 0;
  TensorRef weight_;
  TensorRef bias_;
};

inline double sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

}  // namespace qfl::nn
