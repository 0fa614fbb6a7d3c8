// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <vector>

#include "qfl/common/rng.hpp"

namespace qfl::data {

struct SplitPlan {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
  std::vector<std::vector<std::size_t>> clients;  // disjoint, union == train
};

/// Shuffles [0, n), takes floor(n * train_ratio) indices for training and the
/// rest for testing, then deals training indices into `clients` contiguous
/// shards whose sizes differ by at most one (larger shards first).
SplitPlan make_split(std::size_t n, double train_ratio, int clients, Rng& rng);

/// Throws DataError unless the plan is a valid partition of [0, n).
void check_split(const SplitPlan& plan, std::size_t n);

}  // namespace qfl::data
