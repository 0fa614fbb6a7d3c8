// SPDX-License-Identifier: Apache-2.0
#include "qfl/fed/fedransel.hpp"

#include <cmath>
#include <numeric>

#include "qfl/common/error.hpp"

namespace qfl::fed {

namespace {

void check_fraction(double t, const char* what) {
  if (!(t > 0.0 && t <= 1.0)) throw ConfigError(std::string(what) + " must lie in (0, 1]");
}

// First k entries of a uniformly random permutation of [0, n).
std::vector<std::size_t> choose_distinct(std::size_t n, std::size_t k, Rng& rng) {
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  for (std::size_t i = 0; i < k; ++i) std::swap(idx[i], idx[i + uniform_index(rng, n - i)]);
  idx.resize(k);
  return idx;
}

}  // namespace

std::size_t sample_count(double fraction, std::size_t total) {
  const double raw = fraction * static_cast<double>(total);
  const double k = std::ceil(raw - 1e-9 * std::max(1.0, raw));
  return std::min(total, static_cast<std::size_t>(std::max(0.0, k)));
}

double draw_share_fraction(double t_local, Rng& rng) {
  check_fraction(t_local, "local sampling threshold");
  if (t_local == 1.0) return 1.0;
  // 1 - u for u in [0, 1) lies in (0, 1], so x lies in (t_local, 1].
  return t_local + (1.0 - t_local) * (1.0 - uniform01(rng));
}

SharedSubset sample_local(const nn::ParamStore& store, int node_id, double t_local, Rng& rng,
                          std::optional<double> forced_fraction) {
  if (store.empty()) throw ConfigError("cannot sample from an empty parameter store");
  check_fraction(t_local, "local sampling threshold");
  double x;
  if (forced_fraction) {
    check_fraction(*forced_fraction, "forced share fraction");
    x = *forced_fraction;
  } else {
    x = draw_share_fraction(t_local, rng);
  }
  const std::size_t k = sample_count(x, store.size());
  SharedSubset out{node_id, {}};
  const auto vals = store.values();
  for (std::size_t i : choose_distinct(store.size(), k, rng)) out.entries.emplace(store.id(i), vals[i]);
  return out;
}

GlobalMerge merge_common(std::span<const SharedSubset> subsets) {
  if (subsets.size() < 2) throw ConfigError("merging needs at least two subsets");
  GlobalMerge merge;
  const double n = static_cast<double>(subsets.size());
  for (const auto& [id, first_value] : subsets.front().entries) {
    double sum = first_value;
    bool everywhere = true;
    for (std::size_t s = 1; s < subsets.size() && everywhere; ++s) {
      auto it = subsets[s].entries.find(id);
      if (it == subsets[s].entries.end()) {
        everywhere = false;
      } else {
        sum += it->second;
      }
    }
    if (!everywhere) continue;
    merge.common.push_back(id);
    merge.averaged.emplace(id, sum / n);
  }
  return merge;
}

void sample_global(GlobalMerge& merge, double t_global, Rng& rng) {
  check_fraction(t_global, "global sampling ratio");
  merge.final.clear();
  if (merge.averaged.empty()) return;
  std::vector<const ParamMap::value_type*> entries;
  entries.reserve(merge.averaged.size());
  for (const auto& kv : merge.averaged) entries.push_back(&kv);
  const std::size_t k = sample_count(t_global, entries.size());
  for (std::size_t i : choose_distinct(entries.size(), k, rng)) merge.final.insert(*entries[i]);
}

void apply_update(nn::ParamStore& store, const ParamMap& update) {
  std::vector<std::pair<std::size_t, double>> writes;
  writes.reserve(update.size());
  for (const auto& [id, value] : update) {
    auto idx = store.index_of(id);
    if (!idx) throw ProtocolError("update references unknown parameter " + id);
    writes.emplace_back(*idx, value);
  }
  auto vals = store.values();
  for (auto [i, v] : writes) vals[i] = v;
}

}  // namespace qfl::fed
