// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace qfl::harness {

struct MetricSet {
  double accuracy = 0.0;
  double recall = 0.0;
  double auc = 0.0;
  std::size_t tp = 0, fp = 0, tn = 0, fn = 0;

  /// {"accuracy", "recall", "auc"} for degradation reports and aggregation.
  std::map<std::string, double> headline() const;
};

/// Mann-Whitney AUC: probability that a random positive outscores a random
/// negative, ties counted 1/2. Computed from average ranks in O(n log n).
/// Throws UndefinedMetricError unless both classes are present.
double auc_rank_sum(std::span<const double> scores, std::span<const int> labels);

/// Thresholds sigmoid(score) at `threshold` for accuracy/recall (sigmoid(s) >= t
/// counts as positive). Recall is 0 when there are no positives.
MetricSet compute_metrics(std::span<const double> scores, std::span<const int> labels,
                          double threshold = 0.5);

/// Field-wise mean of headline metrics; confusion counts are summed.
MetricSet mean_metrics(std::span<const MetricSet> sets);

}  // namespace qfl::harness
