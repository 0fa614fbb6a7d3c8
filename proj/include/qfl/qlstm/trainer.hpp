// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "qfl/common/rng.hpp"
#include "qfl/nn/optim.hpp"
#include "qfl/qlstm/model.hpp"

namespace qfl::lstm {

struct TrainOptions {
  nn::OptimizerConfig optimizer;
  int batch_size = 64;
};

/// One pass over `data` in a freshly shuffled order, one optimizer step per
/// minibatch. Per-sample gradients are summed in sample order, so the result
/// does not depend on evaluation scheduling. Returns the mean training loss.
double train_epoch(SequenceModel& model, const SequenceSet& data, const TrainOptions& opts, Rng& rng);

std::vector<double> predict_logits(const SequenceModel& model, const SequenceSet& data);

/// Per-sample BCE-with-logits losses.
std::vector<double> sample_losses(const SequenceModel& model, const SequenceSet& data);

}  // namespace qfl::lstm
