// SPDX-License-Identifier: Apache-2.0
#include "qfl/fed/wire.hpp"

#include "qfl/common/error.hpp"

namespace qfl::harness {

nlohmann::json metrics_to_json(const MetricSet& m) {
  return {{"accuracy", m.accuracy}, {"recall", m.recall}, {"auc", m.auc},
          {"tp", m.tp},             {"fp", m.fp},         {"tn", m.tn},
          {"fn", m.fn}};
}

}  // namespace qfl::harness

namespace qfl::fed {

using nlohmann::json;

json subset_to_json(const SharedSubset& s) {
  json entries = json::array();
  for (const auto& [id, v] : s.entries) entries.push_back(json::array({id, v}));
  return {{"node", s.node_id}, {"entries", std::move(entries)}};
}

SharedSubset subset_from_json(const json& j) {
  SharedSubset s;
  s.node_id = j.at("node").get<int>();
  for (const auto& e : j.at("entries")) {
    if (!s.entries.emplace(e.at(0).get<std::string>(), e.at(1).get<double>()).second) {
      throw ProtocolError("duplicate parameter id in shared subset");
    }
  }
  return s;
}

json round_record_to_json(const RoundRecord& r) {
  json metrics = json::array();
  for (const auto& m : r.node_metrics) metrics.push_back(harness::metrics_to_json(m));
  return {{"round", r.round},
          {"shared_sizes", r.shared_sizes},
          {"common_size", r.common_size},
          {"final_size", r.final_size},
          {"skipped", r.skipped},
          {"train_loss", r.train_loss},
          {"node_metrics", std::move(metrics)}};
}

}  // namespace qfl::fed
