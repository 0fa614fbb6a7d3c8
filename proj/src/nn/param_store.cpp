// SPDX-License-Identifier: Apache-2.0
#include "qfl/nn/param_store.hpp"

#include <algorithm>

#include "qfl/common/error.hpp"

namespace qfl::nn {

TensorRef ParamStore::add_tensor(std::string_view component, std::string_view tensor,
                                 std::size_t size) {
  if (component.empty() || tensor.empty() || component.find('/') != std::string_view::npos ||
      tensor.find('/') != std::string_view::npos) {
    throw ConfigError("parameter component and tensor names must be non-empty and slash-free");
  }
  TensorRef ref{values_.size(), size};
  for (std::size_t i = 0; i < size; ++i) {
    std::string id;
    id.reserve(component.size() + tensor.size() + 8);
    id.append(component).append("/").append(tensor).append("/").append(std::to_string(i));
    if (!lookup_.emplace(id, ids_.size()).second) throw ConfigError("duplicate parameter id " + id);
    ids_.push_back(std::move(id));
  }
  values_.resize(values_.size() + size, 0.0);
  grads_.resize(values_.size(), 0.0);
  m_.resize(values_.size(), 0.0);
  v_.resize(values_.size(), 0.0);
  return ref;
}

std::optional<std::size_t> ParamStore::index_of(std::string_view id) const {
  auto it = lookup_.find(std::string(id));
  if (it == lookup_.end()) return std::nullopt;
  return it->second;
}

double ParamStore::value(std::string_view id) const {
  auto idx = index_of(id);
  if (!idx) throw ProtocolError("unknown parameter id " + std::string(id));
  return values_[*idx];
}

void ParamStore::set_value(std::string_view id, double v) {
  auto idx = index_of(id);
  if (!idx) throw ProtocolError("unknown parameter id " + std::string(id));
  values_[*idx] = v;
}

void ParamStore::zero_grad() { std::fill(grads_.begin(), grads_.end(), 0.0); }

void ParamStore::accumulate_grad(std::span<const double> g, double scale) {
  if (g.size() != grads_.size()) throw ShapeError("gradient size does not match parameter count");
  for (std::size_t i = 0; i < g.size(); ++i) grads_[i] += scale * g[i];
}

}  // namespace qfl::nn
