// SPDX-License-Identifier: Apache-2.0
#include "qfl/threat/inference.hpp"

#include <algorithm>
#include <numeric>
#include <vector>

#include "qfl/common/error.hpp"
#include "qfl/qlstm/trainer.hpp"

namespace qfl::threat {

namespace {

LossSummary summarize(std::span<const double> xs) {
  LossSummary s;
  s.count = xs.size();
  if (xs.empty()) return s;
  s.mean = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
  std::vector<double> sorted(xs.begin(), xs.end());
  std::sort(sorted.begin(), sorted.end());
  const std::size_t mid = sorted.size() / 2;
  s.median = sorted.size() % 2 ? sorted[mid] : 0.5 * (sorted[mid - 1] + sorted[mid]);
  return s;
}

double balanced_accuracy(std::span<const double> members, std::span<const double> nonmembers, double t) {
  const auto hits = std::count_if(members.begin(), members.end(), [t](double l) { return l <= t; });
  const auto rejects = std::count_if(nonmembers.begin(), nonmembers.end(), [t](double l) { return l > t; });
  return 0.5 * (static_cast<double>(hits) / static_cast<double>(members.size()) +
                static_cast<double>(rejects) / static_cast<double>(nonmembers.size()));
}

}  // namespace

InferenceReport membership_inference_from_losses(std::span<const double> member_losses,
                                                 std::span<const double> nonmember_losses) {
  if (member_losses.size() != nonmember_losses.size()) {
    throw ConfigError("member and non-member sets must have equal size");
  }
  if (member_losses.size() < kMinInferenceSamples) {
    throw StatisticalPowerError("membership inference needs at least " +
                                std::to_string(kMinInferenceSamples) + " samples per set");
  }
  const std::size_t half = member_losses.size() / 2;
  const auto cal_m = member_losses.first(half);
  const auto cal_n = nonmember_losses.first(half);
  const auto eval_m = member_losses.subspan(half);
  const auto eval_n = nonmember_losses.subspan(half);

  std::vector<double> pool(cal_m.begin(), cal_m.end());
  pool.insert(pool.end(), cal_n.begin(), cal_n.end());
  std::sort(pool.begin(), pool.end());
  pool.erase(std::unique(pool.begin(), pool.end()), pool.end());

  // Candidates: below everything, and midpoints between consecutive distinct losses.
  double best_t = pool.front() - 1.0;
  double best_acc = balanced_accuracy(cal_m, cal_n, best_t);
  for (std::size_t k = 0; k < pool.size(); ++k) {
    const double t = k + 1 < pool.size() ? 0.5 * (pool[k] + pool[k + 1]) : pool[k] + 1.0;
    const double acc = balanced_accuracy(cal_m, cal_n, t);
    if (acc > best_acc) {
      best_acc = acc;
      best_t = t;
    }
  }

  InferenceReport r;
  r.threshold = best_t;
  r.attack_accuracy = balanced_accuracy(eval_m, eval_n, best_t);
  r.members = summarize(member_losses);
  r.nonmembers = summarize(nonmember_losses);
  r.eval_count = eval_m.size() + eval_n.size();
  return r;
}

InferenceReport membership_inference(const lstm::SequenceModel& model, const lstm::SequenceSet& members,
                                     const lstm::SequenceSet& nonmembers) {
  const auto lm = lstm::sample_losses(model, members);
  const auto ln = lstm::sample_losses(model, nonmembers);
  return membership_inference_from_losses(lm, ln);
}

}  // namespace qfl::threat
