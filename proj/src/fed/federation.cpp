// SPDX-License-Identifier: Apache-2.0
#include "qfl/fed/federation.hpp"

#include <future>
#include <string>

#include "qfl/common/error.hpp"
#include "qfl/fed/fedavg.hpp"

namespace qfl::fed {

Aggregation parse_aggregation(const std::string& name) {
  if (name == "fedransel") return Aggregation::FedRansel;
  if (name == "fedavg") return Aggregation::FedAvg;
  throw ConfigError("unknown aggregation: " + name);
}

const char* aggregation_name(Aggregation a) { return a == Aggregation::FedRansel ? "fedransel" : "fedavg"; }

void FederationConfig::validate() const {
  if (n_nodes < 2) throw ConfigError("a federation needs at least two nodes");
  if (rounds < 1) throw ConfigError("rounds must be positive");
  if (local_epochs < 0) throw ConfigError("local_epochs must be non-negative");
  if (!(t_local > 0 && t_local <= 1)) throw ConfigError("t_local must lie in (0, 1]");
  if (!(t_global > 0 && t_global <= 1)) throw ConfigError("t_global must lie in (0, 1]");
  if (forced_share_fraction && !(*forced_share_fraction > 0 && *forced_share_fraction <= 1)) {
    throw ConfigError("forced share fraction must lie in (0, 1]");
  }
}

namespace {

// Runs fn(i) for i in [0, n) on up to `workers` threads; rethrows the first failure by index.
template <typename Fn>
void for_each_node(int n, int workers, Fn&& fn) {
  if (workers <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  for (int base = 0; base < n; base += workers) {
    std::vector<std::future<void>> jobs;
    for (int i = base; i < std::min(n, base + workers); ++i) {
      jobs.push_back(std::async(std::launch::async, [&fn, i] { fn(i); }));
    }
    for (auto& j : jobs) j.get();
  }
}

ParamMap full_share(const nn::ParamStore& store) {
  ParamMap m;
  const auto v = store.values();
  for (std::size_t i = 0; i < store.size(); ++i) m.emplace(store.id(i), v[i]);
  return m;
}

}  // namespace

FederationResult run_federation(const FederationConfig& cfg, const lstm::TrainOptions& train,
                                std::vector<FederationNode>& nodes, const FederationHooks& hooks,
                                int workers) {
  cfg.validate();
  if (nodes.size() != static_cast<std::size_t>(cfg.n_nodes)) {
    throw ConfigError("expected " + std::to_string(cfg.n_nodes) + " nodes, got " + std::to_string(nodes.size()));
  }
  for (const auto& node : nodes) {
    if (!node.model) throw ConfigError("node without a model");
    if (!node.model->params().same_id_space(nodes.front().model->params())) {
      throw ProtocolError("nodes do not share a parameter ID space");
    }
  }

  const int n = cfg.n_nodes;
  std::vector<Rng> train_rngs, share_rngs, attack_rngs;
  for (int i = 0; i < n; ++i) {
    train_rngs.push_back(derive_rng(cfg.seed, "node-train", static_cast<std::uint64_t>(i)));
    share_rngs.push_back(derive_rng(cfg.seed, "node-share", static_cast<std::uint64_t>(i)));
    attack_rngs.push_back(derive_rng(cfg.seed, "node-attack", static_cast<std::uint64_t>(i)));
  }
  Rng server_rng = derive_rng(cfg.seed, "server");
  Rng defense_rng = derive_rng(cfg.seed, "server-defense");

  const bool plain_fedavg =
      cfg.aggregation == Aggregation::FedAvg && !hooks.before_share && !hooks.server_defense;

  FederationResult result;
  for (int round = 1; round <= cfg.rounds; ++round) {
    RoundRecord rec;
    rec.round = round;
    rec.train_loss.assign(static_cast<std::size_t>(n), 0.0);

    std::vector<std::vector<double>> start_values;
    if (hooks.server_defense) {
      for (const auto& node : nodes) {
        const auto v = node.model->params().values();
        start_values.emplace_back(v.begin(), v.end());
      }
    }

    for_each_node(n, workers, [&](int i) {
      auto& node = nodes[static_cast<std::size_t>(i)];
      try {
        for (int e = 0; e < cfg.local_epochs; ++e) {
          rec.train_loss[static_cast<std::size_t>(i)] =
              lstm::train_epoch(*node.model, node.train, train, train_rngs[static_cast<std::size_t>(i)]);
        }
      } catch (const DivergenceError& err) {
        throw DivergenceError("node " + std::to_string(i) + " diverged in round " +
                              std::to_string(round) + ": " + err.what());
      }
    });

    if (plain_fedavg) {
      std::vector<nn::ParamStore*> stores;
      for (auto& node : nodes) stores.push_back(&node.model->params());
      const std::size_t m = stores.front()->size();
      rec.shared_sizes.assign(static_cast<std::size_t>(n), m);
      rec.common_size = m;
      rec.final_size = m;
      if (round == cfg.rounds) {
        result.last_shared.clear();
        for (int i = 0; i < n; ++i) {
          result.last_shared.push_back({i, full_share(nodes[static_cast<std::size_t>(i)].model->params())});
        }
      }
      fedavg_round(stores);
    } else {
      std::vector<SharedSubset> shared;
      shared.reserve(static_cast<std::size_t>(n));
      for (int i = 0; i < n; ++i) {
        const auto& store = nodes[static_cast<std::size_t>(i)].model->params();
        SharedSubset s;
        if (cfg.aggregation == Aggregation::FedAvg) {
          s = SharedSubset{i, full_share(store)};
        } else {
          s = sample_local(store, i, cfg.t_local, share_rngs[static_cast<std::size_t>(i)],
                           cfg.forced_share_fraction);
        }
        if (hooks.before_share) hooks.before_share(i, s.entries, attack_rngs[static_cast<std::size_t>(i)]);
        rec.shared_sizes.push_back(s.entries.size());
        shared.push_back(std::move(s));
      }

      GlobalMerge merge = merge_common(shared);
      rec.common_size = merge.common.size();
      if (merge.common.empty()) {
        rec.skipped = true;
      } else {
        if (hooks.server_defense) {
          const auto& ref = nodes.front().model->params();
          ParamMap start_mean, delta;
          for (const auto& id : merge.common) {
            const std::size_t idx = *ref.index_of(id);
            double sum = 0.0;
            for (const auto& sv : start_values) sum += sv[idx];
            const double mean = sum / static_cast<double>(n);
            start_mean.emplace(id, mean);
            delta.emplace(id, merge.averaged.at(id) - mean);
          }
          hooks.server_defense(delta, defense_rng);
          for (auto& [id, value] : merge.averaged) value = start_mean.at(id) + delta.at(id);
        }
        if (cfg.aggregation == Aggregation::FedRansel) {
          sample_global(merge, cfg.t_global, server_rng);
        } else {
          merge.final = merge.averaged;
        }
        rec.final_size = merge.final.size();
        for (auto& node : nodes) apply_update(node.model->params(), merge.final);
      }
      if (round == cfg.rounds) result.last_shared = std::move(shared);
    }

    if (hooks.evaluate) {
      rec.node_metrics.resize(static_cast<std::size_t>(n));
      for_each_node(n, workers, [&](int i) {
        rec.node_metrics[static_cast<std::size_t>(i)] = hooks.evaluate(i, *nodes[static_cast<std::size_t>(i)].model);
      });
    }
    if (hooks.on_round) hooks.on_round(rec);
    result.rounds.push_back(std::move(rec));
  }
  return result;
}

}  // namespace qfl::fed
