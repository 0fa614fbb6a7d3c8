// SPDX-License-Identifier: Apache-2.0
#include <numbers>

#include "qfl/common/error.hpp"
#include "qfl/qlstm/model.hpp"

namespace qfl::lstm {

namespace {
constexpr const char* kGateTags[kGateCount] = {"forget", "input", "candidate", "output"};
}

QlstmModel::QlstmModel(const ModelConfig& cfg, std::uint64_t init_seed)
    : SequenceModel(cfg), spec_(cfg.circuit()) {
  if (cfg.kind != ModelKind::Qlstm) throw ConfigError("QlstmModel needs kind=qlstm");
  const int in = cfg.input_dim + cfg.hidden_dim;
  in_map_ = nn::Linear(store_, "in_map", in, cfg.n_qubits);
  for (int g = 0; g < kGateCount; ++g) {
    vqc_[g] = store_.add_tensor(std::string("vqc_") + kGateTags[g], "weight", spec_.weight_count());
  }
  for (int g = 0; g < kGateCount; ++g) {
    out_maps_[g] = nn::Linear(store_, std::string("out_") + kGateTags[g], cfg.n_qubits, cfg.hidden_dim);
  }

  Rng rng(init_seed);
  head_.init(store_, rng);
  in_map_.init(store_, rng);
  for (int g = 0; g < kGateCount; ++g) {
    for (double& w : store_.values(vqc_[g])) w = uniform(rng, 0.0, 2 * std::numbers::pi);
  }
  for (const auto& m : out_maps_) m.init(store_, rng);
}

void QlstmModel::gate_preactivations(std::span<const double> v, StepRecord& rec,
                                     std::array<std::vector<double>, kGateCount>& z) const {
  rec.angles.resize(static_cast<std::size_t>(spec_.n_qubits));
  in_map_.forward(store_, v, rec.angles);
  for (int g = 0; g < kGateCount; ++g) {
    rec.expvals[g] = qc::run_vqc(rec.angles, store_.values(vqc_[g]), spec_);
    z[g].resize(static_cast<std::size_t>(cfg_.hidden_dim));
    out_maps_[g].forward(store_, rec.expvals[g], z[g]);
  }
}

void QlstmModel::gate_backward(const StepRecord& rec,
                               const std::array<std::vector<double>, kGateCount>& dz,
                               std::span<double> grad, std::span<double> dv) const {
  const std::size_t n = static_cast<std::size_t>(spec_.n_qubits);
  std::vector<double> d_angles(n, 0.0);
  std::vector<double> d_exp(n);
  for (int g = 0; g < kGateCount; ++g) {
    out_maps_[g].backward(store_, rec.expvals[g], dz[g], grad, d_exp);
    const auto pg = qc::param_shift_grad(rec.angles, store_.values(vqc_[g]), spec_, d_exp);
    for (std::size_t k = 0; k < pg.weights.size(); ++k) grad[vqc_[g].offset + k] += pg.weights[k];
    for (std::size_t q = 0; q < n; ++q) d_angles[q] += pg.inputs[q];
  }
  in_map_.backward(store_, rec.v, d_angles, grad, dv);
}

}  // namespace qfl::lstm
