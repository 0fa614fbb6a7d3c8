// SPDX-License-Identifier: Apache-2.0
#include "qfl/qlstm/trainer.hpp"

#include <algorithm>
#include <numeric>

#include "qfl/common/error.hpp"
#include "qfl/nn/loss.hpp"

namespace qfl::lstm {

double train_epoch(SequenceModel& model, const SequenceSet& data, const TrainOptions& opts, Rng& rng) {
  if (data.empty()) throw ConfigError("cannot train on an empty shard");
  if (opts.batch_size < 1) throw ConfigError("batch_size must be positive");
  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), 0);
  for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[uniform_index(rng, i)]);

  auto& store = model.params();
  std::vector<double> grad(store.size());
  double total_loss = 0.0;
  const std::size_t bs = static_cast<std::size_t>(opts.batch_size);
  for (std::size_t start = 0; start < order.size(); start += bs) {
    const std::size_t end = std::min(order.size(), start + bs);
    const double m = static_cast<double>(end - start);
    std::fill(grad.begin(), grad.end(), 0.0);
    for (std::size_t k = start; k < end; ++k) {
      const std::size_t idx = order[k];
      const auto trace = model.forward_trace(data.view(idx));
      const int y = data.label(idx);
      total_loss += nn::bce_single(trace.logit, y);
      const double dlogit = (nn::sigmoid(trace.logit) - y) / m;
      model.backward(trace, dlogit, grad);
    }
    store.accumulate_grad(grad);
    nn::optimizer_step(store, opts.optimizer);
  }
  return total_loss / static_cast<double>(order.size());
}

std::vector<double> predict_logits(const SequenceModel& model, const SequenceSet& data) {
  std::vector<double> out(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) out[i] = model.forward(data.view(i));
  return out;
}

std::vector<double> sample_losses(const SequenceModel& model, const SequenceSet& data) {
  std::vector<double> out(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    out[i] = nn::bce_single(model.forward(data.view(i)), data.label(i));
  }
  return out;
}

}  // namespace qfl::lstm
