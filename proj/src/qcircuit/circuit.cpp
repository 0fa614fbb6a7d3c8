// SPDX-License-Identifier: Apache-2.0
#include "qfl/qcircuit/circuit.hpp"

#include <cmath>
#include <numbers>

#include "qfl/common/error.hpp"

namespace qfl::qc {

int GateOp::angle_count() const {
  switch (kind) {
    case GateKind::RX:
    case GateKind::RY:
    case GateKind::RZ:
      return 1;
    case GateKind::Rot:
      return 3;
    case GateKind::CNOT:
      return 0;
  }
  return 0;
}

Mat2 GateOp::matrix() const {
  switch (kind) {
    case GateKind::RX:
      return rx_matrix(angles[0]);
    case GateKind::RY:
      return ry_matrix(angles[0]);
    case GateKind::RZ:
      return rz_matrix(angles[0]);
    case GateKind::Rot:
      return rot_matrix(angles[0], angles[1], angles[2]);
    case GateKind::CNOT:
      break;
  }
  throw UsageError("CNOT has no single-qubit matrix");
}

GateOp GateOp::inverse() const {
  GateOp inv = *this;
  if (kind == GateKind::Rot) {
    // (RZ(w) RY(t) RZ(p))^-1 = RZ(-p) RY(-t) RZ(-w) = Rot(-w, -t, -p)
    inv.angles = {-angles[2], -angles[1], -angles[0]};
  } else if (kind != GateKind::CNOT) {
    inv.angles[0] = -angles[0];
  }
  return inv;
}

const char* gate_name(GateKind kind) {
  switch (kind) {
    case GateKind::RX: return "RX";
    case GateKind::RY: return "RY";
    case GateKind::RZ: return "RZ";
    case GateKind::Rot: return "Rot";
    case GateKind::CNOT: return "CNOT";
  }
  return "?";
}

GateKind parse_gate_kind(const std::string& name) {
  if (name == "RX") return GateKind::RX;
  if (name == "RY") return GateKind::RY;
  if (name == "RZ") return GateKind::RZ;
  if (name == "Rot") return GateKind::Rot;
  if (name == "CNOT") return GateKind::CNOT;
  throw ConfigError("unknown gate kind: " + name);
}

const char* entangler_name(Entangler e) { return e == Entangler::Ring ? "ring" : "chain"; }

Entangler parse_entangler(const std::string& name) {
  if (name == "ring") return Entangler::Ring;
  if (name == "chain") return Entangler::Chain;
  throw ConfigError("unknown entangler: " + name);
}

void CircuitSpec::validate() const {
  if (n_qubits < 1 || n_qubits > kMaxQubits) {
    throw ConfigError("n_qubits must lie in [1, " + std::to_string(kMaxQubits) + "], got " +
                      std::to_string(n_qubits));
  }
  if (depth < 0) throw ConfigError("depth must be non-negative");
}

std::vector<std::pair<int, int>> CircuitSpec::entangler_pairs() const {
  std::vector<std::pair<int, int>> pairs;
  if (n_qubits < 2) return pairs;
  const int last = entangler == Entangler::Ring ? n_qubits : n_qubits - 1;
  // n = 2 gives CNOT(0,1) followed by CNOT(1,0).
  for (int q = 0; q < last; ++q) pairs.emplace_back(q, (q + 1) % n_qubits);
  return pairs;
}

Statevector init_state(int n_qubits) { return Statevector(n_qubits); }

void validate_gate(const GateOp& op, int n_qubits) {
  for (int k = 0; k < op.wire_count(); ++k) {
    if (op.wires[k] < 0 || op.wires[k] >= n_qubits) {
      throw IndexError(std::string(gate_name(op.kind)) + " wire " + std::to_string(op.wires[k]) +
                       " out of range for " + std::to_string(n_qubits) + " qubits");
    }
  }
  if (op.kind == GateKind::CNOT && op.wires[0] == op.wires[1]) {
    throw IndexError("CNOT wires must be distinct");
  }
  for (int k = 0; k < op.angle_count(); ++k) {
    if (!std::isfinite(op.angles[k])) throw ConfigError("non-finite gate angle");
  }
}

void apply_gate_inplace(Statevector& state, const GateOp& op) {
  validate_gate(op, state.n_qubits());
  if (op.kind == GateKind::CNOT) {
    state.apply_cnot(op.wires[0], op.wires[1]);
  } else {
    state.apply_single(op.wires[0], op.matrix());
  }
}

Statevector apply_gate(Statevector state, const GateOp& op) {
  apply_gate_inplace(state, op);
  return state;
}

double expval_z(const Statevector& state, int wire) { return state.expval_z(wire); }

namespace {

void check_shapes(std::span<const double> inputs, std::span<const double> weights,
                  const CircuitSpec& spec) {
  spec.validate();
  if (inputs.size() != static_cast<std::size_t>(spec.n_qubits)) {
    throw ConfigError("VQC expects " + std::to_string(spec.n_qubits) + " inputs, got " +
                      std::to_string(inputs.size()));
  }
  if (weights.size() != spec.weight_count()) {
    throw ConfigError("VQC expects " + std::to_string(spec.weight_count()) + " weights, got " +
                      std::to_string(weights.size()));
  }
  for (double v : inputs) {
    if (!std::isfinite(v)) throw ConfigError("non-finite VQC input");
  }
}

double contract(const std::vector<double>& values, std::span<const double> upstream) {
  double acc = 0.0;
  for (std::size_t q = 0; q < values.size(); ++q) acc += values[q] * upstream[q];
  return acc;
}

// Runs gates[from..] on a copy of `start`, with gates[from] replaced by `first`.
double shifted_run(const Statevector& start, const GateOp& first, std::span<const GateOp> gates,
                   std::size_t from, std::span<const double> upstream) {
  Statevector s = start;
  apply_gate_inplace(s, first);
  for (std::size_t g = from + 1; g < gates.size(); ++g) apply_gate_inplace(s, gates[g]);
  return contract(s.expval_z_all(), upstream);
}

// Prefix caching costs one state per gate; above this many amplitudes we rerun from |0>.
constexpr std::size_t kPrefixCacheLimit = std::size_t{1} << 22;

}  // namespace

std::vector<GateOp> build_circuit(std::span<const double> inputs, std::span<const double> weights,
                                  const CircuitSpec& spec) {
  check_shapes(inputs, weights, spec);
  const auto pairs = spec.entangler_pairs();
  std::vector<GateOp> gates;
  gates.reserve(static_cast<std::size_t>(spec.n_qubits) * (1 + spec.depth) +
                pairs.size() * static_cast<std::size_t>(spec.depth));
  for (int q = 0; q < spec.n_qubits; ++q) gates.push_back(GateOp::rx(q, inputs[q]));
  for (int l = 0; l < spec.depth; ++l) {
    for (int q = 0; q < spec.n_qubits; ++q) {
      gates.push_back(GateOp::rot(q, weights[weight_index(spec, l, q, 0)],
                                  weights[weight_index(spec, l, q, 1)],
                                  weights[weight_index(spec, l, q, 2)]));
    }
    for (auto [c, t] : pairs) gates.push_back(GateOp::cnot(c, t));
  }
  return gates;
}

std::vector<double> run_vqc(std::span<const double> inputs, std::span<const double> weights,
                            const CircuitSpec& spec) {
  const auto gates = build_circuit(inputs, weights, spec);
  Statevector s(spec.n_qubits);
  for (const auto& g : gates) apply_gate_inplace(s, g);
  return s.expval_z_all();
}

VqcGradient param_shift_grad(std::span<const double> inputs, std::span<const double> weights,
                             const CircuitSpec& spec, std::span<const double> upstream) {
  const auto gates = build_circuit(inputs, weights, spec);
  if (upstream.size() != static_cast<std::size_t>(spec.n_qubits)) {
    throw ConfigError("upstream gradient must have one entry per qubit");
  }
  VqcGradient grad{std::vector<double>(inputs.size(), 0.0),
                   std::vector<double>(weights.size(), 0.0)};

  bool all_zero = true;
  for (double u : upstream) all_zero = all_zero && u == 0.0;
  if (all_zero) return grad;

  const std::size_t dim = std::size_t{1} << spec.n_qubits;
  const bool cache = dim * gates.size() <= kPrefixCacheLimit;
  std::vector<Statevector> prefix;
  if (cache) {
    prefix.reserve(gates.size());
    Statevector s(spec.n_qubits);
    for (const auto& g : gates) {
      prefix.push_back(s);
      apply_gate_inplace(s, g);
    }
  }
  auto state_before = [&](std::size_t g) {
    if (cache) return prefix[g];
    Statevector s(spec.n_qubits);
    for (std::size_t k = 0; k < g; ++k) apply_gate_inplace(s, gates[k]);
    return s;
  };

  constexpr double kShift = std::numbers::pi / 2;
  const std::span<const GateOp> all(gates);
  std::size_t weight_cursor = 0;
  for (std::size_t g = 0; g < gates.size(); ++g) {
    const GateOp& op = gates[g];
    const int n_angles = op.angle_count();
    if (n_angles == 0) continue;
    const Statevector start = state_before(g);
    for (int a = 0; a < n_angles; ++a) {
      GateOp plus = op, minus = op;
      plus.angles[a] += kShift;
      minus.angles[a] -= kShift;
      const double d = 0.5 * (shifted_run(start, plus, all, g, upstream) -
                              shifted_run(start, minus, all, g, upstream));
      if (op.kind == GateKind::RX && g < static_cast<std::size_t>(spec.n_qubits)) {
        grad.inputs[static_cast<std::size_t>(op.wires[0])] = d;
      } else {
        grad.weights[weight_cursor++] = d;
      }
    }
  }
  return grad;
}

}  // namespace qfl::qc
