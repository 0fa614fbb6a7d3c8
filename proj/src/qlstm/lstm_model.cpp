// SPDX-License-Identifier: Apache-2.0
#include "qfl/common/error.hpp"
#include "qfl/qlstm/model.hpp"

namespace qfl::lstm {

LstmModel::LstmModel(const ModelConfig& cfg, std::uint64_t init_seed) : SequenceModel(cfg) {
  if (cfg.kind != ModelKind::Lstm) throw ConfigError("LstmModel needs kind=lstm");
  constexpr const char* tags[kGateCount] = {"lstm_forget", "lstm_input", "lstm_candidate", "lstm_output"};
  const int in = cfg.input_dim + cfg.hidden_dim;
  for (int g = 0; g < kGateCount; ++g) gate_maps_[g] = nn::Linear(store_, tags[g], in, cfg.hidden_dim);

  Rng rng(init_seed);
  head_.init(store_, rng);
  for (const auto& m : gate_maps_) m.init(store_, rng);
}

void LstmModel::gate_preactivations(std::span<const double> v, StepRecord&,
                                    std::array<std::vector<double>, kGateCount>& z) const {
  for (int g = 0; g < kGateCount; ++g) {
    z[g].resize(static_cast<std::size_t>(cfg_.hidden_dim));
    gate_maps_[g].forward(store_, v, z[g]);
  }
}

void LstmModel::gate_backward(const StepRecord& rec,
                              const std::array<std::vector<double>, kGateCount>& dz,
                              std::span<double> grad, std::span<double> dv) const {
  std::fill(dv.begin(), dv.end(), 0.0);
  std::vector<double> part(dv.size());
  for (int g = 0; g < kGateCount; ++g) {
    gate_maps_[g].backward(store_, rec.v, dz[g], grad, part);
    for (std::size_t k = 0; k < dv.size(); ++k) dv[k] += part[k];
  }
}

}  // namespace qfl::lstm
