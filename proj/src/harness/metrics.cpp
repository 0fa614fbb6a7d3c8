// SPDX-License-Identifier: Apache-2.0
#include "qfl/harness/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "qfl/common/error.hpp"
#include "qfl/nn/linear.hpp"

namespace qfl::harness {

std::map<std::string, double> MetricSet::headline() const {
  return {{"accuracy", accuracy}, {"recall", recall}, {"auc", auc}};
}

double auc_rank_sum(std::span<const double> scores, std::span<const int> labels) {
  if (scores.size() != labels.size()) throw ShapeError("scores and labels differ in length");
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

  double pos_rank_sum = 0.0;
  std::size_t n_pos = 0;
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j < order.size() && scores[order[j]] == scores[order[i]]) ++j;
    const double avg_rank = 0.5 * static_cast<double>(i + 1 + j);  // ranks i+1..j
    for (std::size_t k = i; k < j; ++k) {
      if (labels[order[k]] == 1) {
        pos_rank_sum += avg_rank;
        ++n_pos;
      }
    }
    i = j;
  }
  const std::size_t n_neg = scores.size() - n_pos;
  if (n_pos == 0 || n_neg == 0) throw UndefinedMetricError("AUC needs both classes present");
  const double np = static_cast<double>(n_pos);
  const double u = pos_rank_sum - np * (np + 1) / 2;
  return u / (np * static_cast<double>(n_neg));
}

MetricSet compute_metrics(std::span<const double> scores, std::span<const int> labels, double threshold) {
  if (scores.size() != labels.size()) throw ShapeError("scores and labels differ in length");
  if (scores.empty()) throw ConfigError("cannot score an empty set");
  MetricSet m;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    const bool pred = nn::sigmoid(scores[i]) >= threshold;
    const bool pos = labels[i] == 1;
    if (pred && pos) ++m.tp;
    else if (pred && !pos) ++m.fp;
    else if (!pred && pos) ++m.fn;
    else ++m.tn;
  }
  m.accuracy = static_cast<double>(m.tp + m.tn) / static_cast<double>(scores.size());
  m.recall = m.tp + m.fn > 0 ? static_cast<double>(m.tp) / static_cast<double>(m.tp + m.fn) : 0.0;
  m.auc = auc_rank_sum(scores, labels);
  return m;
}

MetricSet mean_metrics(std::span<const MetricSet> sets) {
  MetricSet out;
  if (sets.empty()) return out;
  for (const auto& s : sets) {
    out.accuracy += s.accuracy;
    out.recall += s.recall;
    out.auc += s.auc;
    out.tp += s.tp;
    out.fp += s.fp;
    out.tn += s.tn;
    out.fn += s.fn;
  }
  const double n = static_cast<double>(sets.size());
  out.accuracy /= n;
  out.recall /= n;
  out.auc /= n;
  return out;
}

}  // namespace qfl::harness
