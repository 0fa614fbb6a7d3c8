// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>

#include "qfl/qlstm/model.hpp"

namespace qfl::threat {

struct LossSummary {
  double mean = 0.0;
  double median = 0.0;
  std::size_t count = 0;
};

struct InferenceReport {
  double attack_accuracy = 0.5;  // on the evaluation halves, balanced
  double threshold = 0.0;        // loss <= threshold is called "member"
  LossSummary members;
  LossSummary nonmembers;
  std::size_t eval_count = 0;
};

inline constexpr std::size_t kMinInferenceSamples = 50;

/// Loss-threshold membership inference. The first half of each loss list
/// calibrates the threshold (maximizing balanced accuracy), the second half is
/// scored. Both lists must hold the same number of entries, at least kMinInferenceSamples.
InferenceReport membership_inference_from_losses(std::span<const double> member_losses,
                                                 std::span<const double> nonmember_losses);

InferenceReport membership_inference(const lstm::SequenceModel& model, const lstm::SequenceSet& members,
                                     const lstm::SequenceSet& nonmembers);

}  // namespace qfl::threat
