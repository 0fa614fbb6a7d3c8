// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <string>
#include <vector>

namespace qfl::threat {

struct DegradationRow {
  std::string metric;
  double clean = 0.0;
  double attacked = 0.0;
  double pct_change = 0.0;  // 100 * (attacked - clean) / clean; negative means degradation
};

/// One row per metric, in key order. Keys must match; a zero clean value raises
/// UndefinedMetricError.
std::vector<DegradationRow> degradation_report(const std::map<std::string, double>& clean,
                                               const std::map<std::string, double>& attacked);

/// CSV with header "metric,clean,attacked,pct_change".
std::string degradation_csv(const std::vector<DegradationRow>& rows);

}  // namespace qfl::threat
