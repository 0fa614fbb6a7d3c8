// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "json.hpp"
#include "qfl/fed/fedransel.hpp"
#include "qfl/fed/federation.hpp"
#include "qfl/harness/metrics.hpp"

namespace qfl::fed {

// SharedSubset message:
//   {"node": 2, "entries": [["in_map/bias/0", -0.01], ...]}
// Entries are sorted by ParamId so identical subsets serialize to identical bytes.
nlohmann::json subset_to_json(const SharedSubset& s);
SharedSubset subset_from_json(const nlohmann::json& j);

// One line of round_log.jsonl:
//   {"round": 1, "shared_sizes": [...], "common_size": n, "final_size": n,
//    "skipped": false, "train_loss": [...], "node_metrics": [{...}, ...]}
nlohmann::json round_record_to_json(const RoundRecord& r);

}  // namespace qfl::fed

namespace qfl::harness {
nlohmann::json metrics_to_json(const MetricSet& m);
}
