// SPDX-License-Identifier: Apache-2.0
#include "qfl/fed/fedavg.hpp"

#include <vector>

#include "qfl/common/error.hpp"

namespace qfl::fed {

void fedavg_round(std::span<nn::ParamStore* const> stores) {
  if (stores.empty()) return;
  const nn::ParamStore& ref = *stores.front();
  for (const auto* s : stores) {
    if (!s->same_id_space(ref)) throw ProtocolError("nodes do not share a parameter ID space");
  }
  // Same summation order as merge_common: node 0 first, then the rest in order.
  std::vector<double> sum(ref.values().begin(), ref.values().end());
  for (std::size_t s = 1; s < stores.size(); ++s) {
    const auto v = stores[s]->values();
    for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += v[i];
  }
  const double n = static_cast<double>(stores.size());
  for (double& x : sum) x /= n;
  for (auto* s : stores) {
    auto v = s->values();
    std::copy(sum.begin(), sum.end(), v.begin());
  }
}

}  // namespace qfl::fed
