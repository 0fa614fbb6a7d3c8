// SPDX-License-Identifier: Apache-2.0
#include "qfl/data/split.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "qfl/common/error.hpp"

namespace qfl::data {

SplitPlan make_split(std::size_t n, double train_ratio, int clients, Rng& rng) {
  if (!(train_ratio > 0 && train_ratio < 1)) throw ConfigError("train_ratio must lie in (0, 1)");
  if (clients < 1) throw ConfigError("need at least one client");
  const auto n_train = static_cast<std::size_t>(std::floor(static_cast<double>(n) * train_ratio + 1e-9));
  if (n_train < static_cast<std::size_t>(clients)) {
    throw ConfigError("too few samples: " + std::to_string(n_train) + " training rows for " +
                      std::to_string(clients) + " clients");
  }
  if (n_train == n) throw ConfigError("test split would be empty");

  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  for (std::size_t i = n; i > 1; --i) std::swap(idx[i - 1], idx[uniform_index(rng, i)]);

  SplitPlan plan;
  plan.train.assign(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(n_train));
  plan.test.assign(idx.begin() + static_cast<std::ptrdiff_t>(n_train), idx.end());
  const std::size_t k = static_cast<std::size_t>(clients);
  const std::size_t base = n_train / k, extra = n_train % k;
  std::size_t cursor = 0;
  for (std::size_t c = 0; c < k; ++c) {
    const std::size_t len = base + (c < extra ? 1 : 0);
    plan.clients.emplace_back(plan.train.begin() + static_cast<std::ptrdiff_t>(cursor),
                              plan.train.begin() + static_cast<std::ptrdiff_t>(cursor + len));
    cursor += len;
  }
  return plan;
}

void check_split(const SplitPlan& plan, std::size_t n) {
  std::vector<int> owner(n, 0);  // 1 = train, 2 = test
  for (std::size_t i : plan.train) {
    if (i >= n || owner[i]) throw DataError("train indices out of range or repeated");
    owner[i] = 1;
  }
  for (std::size_t i : plan.test) {
    if (i >= n || owner[i]) throw DataError("test overlaps train or repeats");
    owner[i] = 2;
  }
  if (plan.train.size() + plan.test.size() != n) throw DataError("split does not cover the dataset");
  std::vector<bool> dealt(n, false);
  std::size_t total = 0;
  for (const auto& shard : plan.clients) {
    for (std::size_t i : shard) {
      if (i >= n || owner[i] != 1 || dealt[i]) throw DataError("client shards are not a partition of train");
      dealt[i] = true;
    }
    total += shard.size();
  }
  if (total != plan.train.size()) throw DataError("client shards do not cover train");
}

}  // namespace qfl::data
