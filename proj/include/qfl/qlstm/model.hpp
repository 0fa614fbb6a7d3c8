// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qfl/nn/linear.hpp"
#include "qfl/nn/param_store.hpp"
#include "qfl/qcircuit/circuit.hpp"
#include "qfl/qlstm/sequence.hpp"

namespace qfl::lstm {

enum class ModelKind { Qlstm, Lstm };

ModelKind parse_model_kind(const std::string& name);
const char* model_kind_name(ModelKind k);

struct ModelConfig {
  ModelKind kind = ModelKind::Qlstm;
  int input_dim = 1;
  int hidden_dim = 4;
  int n_qubits = 4;
  int depth = 2;
  int seq_len = 3;
  qc::Entangler entangler = qc::Entangler::Ring;

  void validate() const;
  qc::CircuitSpec circuit() const { return {n_qubits, depth, entangler}; }
};

/// Gate slots in the order forget, input, candidate, output.
enum Gate : int { kForget = 0, kInput = 1, kCandidate = 2, kOutput = 3 };
inline constexpr int kGateCount = 4;

/// Activated gate outputs: f, i, o in (0,1), g in (-1,1).
using GateValues = std::array<std::vector<double>, kGateCount>;

struct CellState {
  std::vector<double> h;
  std::vector<double> c;

  static CellState zeros(int hidden) {
    return {std::vector<double>(static_cast<std::size_t>(hidden), 0.0),
            std::vector<double>(static_cast<std::size_t>(hidden), 0.0)};
  }
};

/// Bound on |c| entries; exceeding it aborts training.
inline constexpr double kCellStateLimit = 1e3;

/// c_t = f * c_{t-1} + i * g, h_t = o * tanh(c_t).
/// Throws DivergenceError when any |c_t| exceeds kCellStateLimit or is non-finite.
CellState update_cell_state(const GateValues& gates, std::span<const double> c_prev);

/// Test hook: replaces selected activated gate vectors after they are computed.
struct GateOverride {
  std::array<std::optional<std::vector<double>>, kGateCount> values;
};

/// Everything the backward pass needs from one time step.
struct StepRecord {
  std::vector<double> v;                               // concat(x_t, h_{t-1})
  std::vector<double> angles;                          // quantum: in_map output
  std::array<std::vector<double>, kGateCount> expvals; // quantum: <Z> per gate circuit
  GateValues gates;
  std::vector<double> c_prev;
  std::vector<double> c;
  std::vector<double> tanh_c;
};

struct CellStep {
  CellState state;
  StepRecord record;
};

struct ForwardTrace {
  std::vector<StepRecord> steps;
  std::vector<double> h_last;
  double logit = 0.0;
  std::size_t param_count = 0;

  bool empty() const { return steps.empty(); }
};

/// Recurrent classifier: zero initial state, one shared cell applied over the
/// window, and a linear head on the last hidden state producing one logit.
/// Subclasses provide the gate pre-activations and their backward pass.
class SequenceModel {
 public:
  virtual ~SequenceModel() = default;

  virtual std::unique_ptr<SequenceModel> clone() const = 0;

  const ModelConfig& config() const { return cfg_; }
  nn::ParamStore& params() { return store_; }
  const nn::ParamStore& params() const { return store_; }
  std::size_t param_count() const { return store_.size(); }
  const nn::Linear& head() const { return head_; }

  CellStep cell_forward(std::span<const double> x, const CellState& state,
                        const GateOverride* override_gates = nullptr) const;

  double forward(SequenceView seq) const;
  ForwardTrace forward_trace(SequenceView seq) const;

  /// Backpropagation through time. Adds dlogit-scaled gradients of every
  /// parameter into `grad` (one slot per store entry).
  void backward(const ForwardTrace& trace, double dlogit, std::span<double> grad) const;

  /// Same as backward, accumulating into the store's gradient slots.
  void backward_into_store(const ForwardTrace& trace, double dlogit);

 protected:
  explicit SequenceModel(const ModelConfig& cfg);

  virtual void gate_preactivations(std::span<const double> v, StepRecord& rec,
                                   std::array<std::vector<double>, kGateCount>& z) const = 0;
  /// Adds parameter gradients to `grad` and writes dL/dv into `dv`.
  virtual void gate_backward(const StepRecord& rec,
                             const std::array<std::vector<double>, kGateCount>& dz,
                             std::span<double> grad, std::span<double> dv) const = 0;

  void check_sequence(SequenceView seq) const;

  ModelConfig cfg_;
  nn::ParamStore store_;
  nn::Linear head_;
};

/// QLSTM: shared in_map (d+H -> n), one VQC per gate, per-gate out_map (n -> H).
class QlstmModel final : public SequenceModel {
 public:
  QlstmModel(const ModelConfig& cfg, std::uint64_t init_seed);

  std::unique_ptr<SequenceModel> clone() const override {
    return std::make_unique<QlstmModel>(*this);
  }

  const nn::Linear& in_map() const { return in_map_; }
  const nn::Linear& out_map(int gate) const { return out_maps_[gate]; }
  nn::TensorRef vqc_weights(int gate) const { return vqc_[gate]; }

 protected:
  void gate_preactivations(std::span<const double> v, StepRecord& rec,
                           std::array<std::vector<double>, kGateCount>& z) const override;
  void gate_backward(const StepRecord& rec, const std::array<std::vector<double>, kGateCount>& dz,
                     std::span<double> grad, std::span<double> dv) const override;

 private:
  qc::CircuitSpec spec_;
  nn::Linear in_map_;
  std::array<nn::TensorRef, kGateCount> vqc_;
  std::array<nn::Linear, kGateCount> out_maps_;
};

/// Classical LSTM: one affine map (d+H -> H) per gate.
class LstmModel final : public SequenceModel {
 public:
  LstmModel(const ModelConfig& cfg, std::uint64_t init_seed);

  std::unique_ptr<SequenceModel> clone() const override {
    return std::make_unique<LstmModel>(*this);
  }

  const nn::Linear& gate_map(int gate) const { return gate_maps_[gate]; }

 protected:
  void gate_preactivations(std::span<const double> v, StepRecord& rec,
                           std::array<std::vector<double>, kGateCount>& z) const override;
  void gate_backward(const StepRecord& rec, const std::array<std::vector<double>, kGateCount>& dz,
                     std::span<double> grad, std::span<double> dv) const override;

 private:
  std::array<nn::Linear, kGateCount> gate_maps_;
};

std::unique_ptr<SequenceModel> make_model(const ModelConfig& cfg, std::uint64_t init_seed);

std::size_t qlstm_param_count(int input_dim, int hidden, int n_qubits, int depth);
std::size_t lstm_param_count(int input_dim, int hidden);

/// Hidden size for a classical LSTM whose parameter count is closest to `target`.
int matched_lstm_hidden(int input_dim, std::size_t target);

}  // namespace qfl::lstm
