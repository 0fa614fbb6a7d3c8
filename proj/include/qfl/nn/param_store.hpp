// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace qfl::nn {

/// Contiguous block of scalars inside a ParamStore.
struct TensorRef {
  std::size_t offset = 0;
  std::size_t size = 0;
};

/// Flat registry of named scalar parameters. Every scalar has a stable ID of the
/// form "component/tensor/flat_index"; registration order defines the global
/// index, so two stores built from the same model config agree on both.
///
/// Each entry also carries a gradient accumulator and Adam moment slots.
class ParamStore {
 public:
  TensorRef add_tensor(std::string_view component, std::string_view tensor, std::size_t size);

  std::size_t size() const { return values_.size(); }
  bool empty() const { return values_.empty(); }

  const std::vector<std::string>& ids() const { return ids_; }
  const std::string& id(std::size_t i) const { return ids_.at(i); }
  std::optional<std::size_t> index_of(std::string_view id) const;

  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }
  std::span<double> values(TensorRef t) { return std::span<double>(values_).subspan(t.offset, t.size); }
  std::span<const double> values(TensorRef t) const {
    return std::span<const double>(values_).subspan(t.offset, t.size);
  }

  /// Value by ID; throws ProtocolError for unknown IDs.
  double value(std::string_view id) const;
  void set_value(std::string_view id, double v);

  std::span<double> grads() { return grads_; }
  std::span<const double> grads() const { return grads_; }
  void zero_grad();
  /// grads += scale * g, elementwise. Sizes must match.
  void accumulate_grad(std::span<const double> g, double scale = 1.0);

  std::span<double> first_moment() { return m_; }
  std::span<double> second_moment() { return v_; }
  std::uint64_t step_count() const { return steps_; }
  void set_step_count(std::uint64_t s) { steps_ = s; }

  /// True when both stores hold the same ID sequence.
  bool same_id_space(const ParamStore& other) const { return ids_ == other.ids_; }

 private:
  std::vector<std::string> ids_;
  std::unordered_map<std::string, std::size_t> lookup_;
  std::vector<double> values_;
  std::vector<double> grads_;
  std::vector<double> m_;
  std::vector<double> v_;
  std::uint64_t steps_ = 0;
};

}  // namespace qfl::nn
