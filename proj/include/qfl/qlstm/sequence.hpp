// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace qfl::lstm {

/// One L x d window, row-major.
struct SequenceView {
  std::span<const double> data;
  int length = 0;
  int dim = 0;

  std::span<const double> row(int t) const {
    return data.subspan(static_cast<std::size_t>(t) * dim, static_cast<std::size_t>(dim));
  }
};

/// Labelled windows of fixed shape, stored contiguously.
class SequenceSet {
 public:
  SequenceSet() = default;
  SequenceSet(int seq_len, int dim);

  int seq_len() const { return seq_len_; }
  int dim() const { return dim_; }
  std::size_t size() const { return labels_.size(); }
  bool empty() const { return labels_.empty(); }

  void add(std::span<const double> window, int label);

  SequenceView view(std::size_t i) const;
  int label(std::size_t i) const { return labels_.at(i); }
  std::span<const int> labels() const { return labels_; }
  std::vector<int>& mutable_labels() { return labels_; }
  std::span<const double> raw() const { return data_; }

  SequenceSet subset(std::span<const std::size_t> indices) const;

 private:
  int seq_len_ = 0;
  int dim_ = 0;
  std::vector<double> data_;
  std::vector<int> labels_;
};

}  // namespace qfl::lstm
