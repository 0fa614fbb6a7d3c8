// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "qfl/fed/fedransel.hpp"
#include "qfl/harness/metrics.hpp"
#include "qfl/qlstm/model.hpp"
#include "qfl/qlstm/trainer.hpp"

namespace qfl::fed {

enum class Aggregation { FedRansel, FedAvg };

Aggregation parse_aggregation(const std::string& name);
const char* aggregation_name(Aggregation a);

struct FederationConfig {
  int n_nodes = 5;
  int rounds = 5;
  int local_epochs = 10;
  double t_local = 0.8;
  double t_global = 0.8;
  Aggregation aggregation = Aggregation::FedRansel;
  std::uint64_t seed = 0;
  /// When set, every node shares this fraction instead of drawing x.
  std::optional<double> forced_share_fraction;

  void validate() const;
};

struct FederationNode {
  std::unique_ptr<lstm::SequenceModel> model;
  lstm::SequenceSet train;
};

struct RoundRecord {
  int round = 0;
  std::vector<std::size_t> shared_sizes;  // |S_i| per node
  std::size_t common_size = 0;            // |C|
  std::size_t final_size = 0;             // |G_f|
  bool skipped = false;                   // C was empty
  std::vector<double> train_loss;         // mean loss of the last local epoch, per node
  std::vector<harness::MetricSet> node_metrics;
};

/// Protocol interception points. All are optional.
struct FederationHooks {
  /// Called on each node's outgoing values just before they reach the server.
  std::function<void(int node, ParamMap& shared, Rng& rng)> before_share;
  /// Server-side transform of the aggregated update: receives averaged minus the
  /// nodes' mean round-start value for each common key, and may rewrite it.
  std::function<void(ParamMap& delta, Rng& rng)> server_defense;
  /// Scores a node's model after the round's update.
  std::function<harness::MetricSet(int node, const lstm::SequenceModel& model)> evaluate;
  /// Streams each finished round (for incremental logging).
  std::function<void(const RoundRecord&)> on_round;
};

struct FederationResult {
  std::vector<RoundRecord> rounds;
  /// What the server received in the final round.
  std::vector<SharedSubset> last_shared;
};

/// Per round: local epochs on every node, sharing, merge, optional defense,
/// global sampling, broadcast. A round whose common set is empty leaves every
/// node untouched. Node training streams and the server stream are derived from
/// cfg.seed, so results are independent of `workers`.
FederationResult run_federation(const FederationConfig& cfg, const lstm::TrainOptions& train,
                                std::vector<FederationNode>& nodes, const FederationHooks& hooks = {},
                                int workers = 1);

}  // namespace qfl::fed
