// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <string>

#include "qfl/common/error.hpp"
#include "qfl/qlstm/model.hpp"

namespace qfl::lstm {

SequenceSet::SequenceSet(int seq_len, int dim) : seq_len_(seq_len), dim_(dim) {
  if (seq_len <= 0 || dim <= 0) throw ConfigError("sequence shape must be positive");
}

void SequenceSet::add(std::span<const double> window, int label) {
  if (window.size() != static_cast<std::size_t>(seq_len_) * dim_) {
    throw ShapeError("window has " + std::to_string(window.size()) + " values, expected " +
                     std::to_string(seq_len_ * dim_));
  }
  if (label != 0 && label != 1) throw DataError("labels must be binary");
  data_.insert(data_.end(), window.begin(), window.end());
  labels_.push_back(label);
}

SequenceView SequenceSet::view(std::size_t i) const {
  if (i >= size()) throw IndexError("sequence index out of range");
  const std::size_t stride = static_cast<std::size_t>(seq_len_) * dim_;
  return {std::span<const double>(data_).subspan(i * stride, stride), seq_len_, dim_};
}

SequenceSet SequenceSet::subset(std::span<const std::size_t> indices) const {
  SequenceSet out(seq_len_, dim_);
  for (std::size_t i : indices) out.add(view(i).data, labels_.at(i));
  return out;
}

ModelKind parse_model_kind(const std::string& name) {
  if (name == "qlstm") return ModelKind::Qlstm;
  if (name == "lstm") return ModelKind::Lstm;
  throw ConfigError("unknown model kind: " + name);
}

const char* model_kind_name(ModelKind k) { return k == ModelKind::Qlstm ? "qlstm" : "lstm"; }

void ModelConfig::validate() const {
  if (input_dim < 1) throw ConfigError("input_dim must be positive");
  if (hidden_dim < 1) throw ConfigError("hidden_dim must be positive");
  if (seq_len < 1) throw ConfigError("seq_len must be positive");
  if (kind == ModelKind::Qlstm) circuit().validate();
}

CellState update_cell_state(const GateValues& gates, std::span<const double> c_prev) {
  const std::size_t H = c_prev.size();
  for (const auto& g : gates) {
    if (g.size() != H) throw ShapeError("gate vector length differs from cell state length");
  }
  CellState out{std::vector<double>(H), std::vector<double>(H)};
  for (std::size_t k = 0; k < H; ++k) {
    const double c = gates[kForget][k] * c_prev[k] + gates[kInput][k] * gates[kCandidate][k];
    if (!std::isfinite(c) || std::abs(c) > kCellStateLimit) {
      throw DivergenceError("cell state diverged (|c| = " + std::to_string(std::abs(c)) + ")");
    }
    out.c[k] = c;
    out.h[k] = gates[kOutput][k] * std::tanh(c);
  }
  return out;
}

SequenceModel::SequenceModel(const ModelConfig& cfg) : cfg_(cfg) {
  cfg_.validate();
  head_ = nn::Linear(store_, "head", cfg_.hidden_dim, 1);
}

void SequenceModel::check_sequence(SequenceView seq) const {
  if (seq.length != cfg_.seq_len) {
    throw ShapeError("sequence length " + std::to_string(seq.length) + " but model expects " +
                     std::to_string(cfg_.seq_len));
  }
  if (seq.dim != cfg_.input_dim) {
    throw ShapeError("feature width " + std::to_string(seq.dim) + " but model expects " +
                     std::to_string(cfg_.input_dim));
  }
}

CellStep SequenceModel::cell_forward(std::span<const double> x, const CellState& state,
                                     const GateOverride* override_gates) const {
  const std::size_t d = static_cast<std::size_t>(cfg_.input_dim);
  const std::size_t H = static_cast<std::size_t>(cfg_.hidden_dim);
  if (x.size() != d) throw ShapeError("cell input has wrong width");
  if (state.h.size() != H || state.c.size() != H) throw ShapeError("cell state has wrong width");

  CellStep out;
  StepRecord& rec = out.record;
  rec.v.reserve(d + H);
  rec.v.insert(rec.v.end(), x.begin(), x.end());
  rec.v.insert(rec.v.end(), state.h.begin(), state.h.end());
  for (double val : rec.v) {
    if (!std::isfinite(val)) throw DivergenceError("non-finite cell input");
  }

  std::array<std::vector<double>, kGateCount> z;
  gate_preactivations(rec.v, rec, z);
  for (int gi = 0; gi < kGateCount; ++gi) {
    auto& act = rec.gates[gi];
    act.resize(H);
    for (std::size_t k = 0; k < H; ++k) {
      if (!std::isfinite(z[gi][k])) throw DivergenceError("non-finite gate pre-activation");
      act[k] = gi == kCandidate ? std::tanh(z[gi][k]) : nn::sigmoid(z[gi][k]);
    }
    if (override_gates && override_gates->values[gi]) {
      if (override_gates->values[gi]->size() != H) throw ShapeError("override gate has wrong width");
      act = *override_gates->values[gi];
    }
  }

  rec.c_prev = state.c;
  out.state = update_cell_state(rec.gates, state.c);
  rec.c = out.state.c;
  rec.tanh_c.resize(H);
  for (std::size_t k = 0; k < H; ++k) rec.tanh_c[k] = std::tanh(rec.c[k]);
  return out;
}

ForwardTrace SequenceModel::forward_trace(SequenceView seq) const {
  check_sequence(seq);
  ForwardTrace trace;
  trace.steps.reserve(static_cast<std::size_t>(seq.length));
  CellState state = CellState::zeros(cfg_.hidden_dim);
  for (int t = 0; t < seq.length; ++t) {
    CellStep step = cell_forward(seq.row(t), state);
    state = std::move(step.state);
    trace.steps.push_back(std::move(step.record));
  }
  double logit = 0.0;
  head_.forward(store_, state.h, std::span<double>(&logit, 1));
  trace.h_last = std::move(state.h);
  trace.logit = logit;
  trace.param_count = store_.size();
  return trace;
}

double SequenceModel::forward(SequenceView seq) const { return forward_trace(seq).logit; }

void SequenceModel::backward(const ForwardTrace& trace, double dlogit, std::span<double> grad) const {
  if (trace.empty()) throw UsageError("backward called without a forward record");
  if (trace.param_count != store_.size() ||
      trace.steps.size() != static_cast<std::size_t>(cfg_.seq_len)) {
    throw UsageError("forward record does not belong to this model");
  }
  if (grad.size() != store_.size()) throw ShapeError("gradient buffer must span the whole store");

  const std::size_t d = static_cast<std::size_t>(cfg_.input_dim);
  const std::size_t H = static_cast<std::size_t>(cfg_.hidden_dim);

  std::vector<double> dh(H);
  head_.backward(store_, trace.h_last, std::span<const double>(&dlogit, 1), grad, dh);
  std::vector<double> dc(H, 0.0);
  std::array<std::vector<double>, kGateCount> dz;
  for (auto& v : dz) v.assign(H, 0.0);
  std::vector<double> dv(d + H);

  for (std::size_t t = trace.steps.size(); t-- > 0;) {
    const StepRecord& rec = trace.steps[t];
    const auto& f = rec.gates[kForget];
    const auto& i = rec.gates[kInput];
    const auto& g = rec.gates[kCandidate];
    const auto& o = rec.gates[kOutput];
    for (std::size_t k = 0; k < H; ++k) {
      const double tc = rec.tanh_c[k];
      const double d_o = dh[k] * tc;
      dc[k] += dh[k] * o[k] * (1.0 - tc * tc);
      const double d_f = dc[k] * rec.c_prev[k];
      const double d_i = dc[k] * g[k];
      const double d_g = dc[k] * i[k];
      dz[kForget][k] = d_f * f[k] * (1.0 - f[k]);
      dz[kInput][k] = d_i * i[k] * (1.0 - i[k]);
      dz[kCandidate][k] = d_g * (1.0 - g[k] * g[k]);
      dz[kOutput][k] = d_o * o[k] * (1.0 - o[k]);
      dc[k] *= f[k];
    }
    gate_backward(rec, dz, grad, dv);
    for (std::size_t k = 0; k < H; ++k) dh[k] = dv[d + k];
  }
}

void SequenceModel::backward_into_store(const ForwardTrace& trace, double dlogit) {
  std::vector<double> grad(store_.size(), 0.0);
  backward(trace, dlogit, grad);
  store_.accumulate_grad(grad);
}

std::unique_ptr<SequenceModel> make_model(const ModelConfig& cfg, std::uint64_t init_seed) {
  if (cfg.kind == ModelKind::Qlstm) return std::make_unique<QlstmModel>(cfg, init_seed);
  return std::make_unique<LstmModel>(cfg, init_seed);
}

std::size_t qlstm_param_count(int d, int H, int n, int depth) {
  const std::size_t in_map = static_cast<std::size_t>(d + H) * n + n;
  const std::size_t vqc = 4u * static_cast<std::size_t>(depth) * n * 3;
  const std::size_t out_maps = 4u * (static_cast<std::size_t>(n) * H + H);
  const std::size_t head = static_cast<std::size_t>(H) + 1;
  return in_map + vqc + out_maps + head;
}

std::size_t lstm_param_count(int d, int H) {
  return 4u * (static_cast<std::size_t>(d + H) * H + H) + static_cast<std::size_t>(H) + 1;
}

int matched_lstm_hidden(int input_dim, std::size_t target) {
  int best = 1;
  auto gap = [&](int h) {
    const auto c = lstm_param_count(input_dim, h);
    return c > target ? c - target : target - c;
  };
  for (int h = 2; h < 4096; ++h) {
    if (gap(h) < gap(best)) best = h;
    if (lstm_param_count(input_dim, h) > target) break;
  }
  return best;
}

}  // namespace qfl::lstm
