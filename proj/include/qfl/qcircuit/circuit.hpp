// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qfl/qcircuit/statevector.hpp"

namespace qfl::qc {

enum class GateKind { RX, RY, RZ, Rot, CNOT };

struct GateOp {
  GateKind kind = GateKind::RX;
  std::array<int, 2> wires{0, 0};
  std::array<double, 3> angles{0.0, 0.0, 0.0};

  static GateOp rx(int wire, double theta) { return {GateKind::RX, {wire, 0}, {theta, 0, 0}}; }
  static GateOp ry(int wire, double theta) { return {GateKind::RY, {wire, 0}, {theta, 0, 0}}; }
  static GateOp rz(int wire, double theta) { return {GateKind::RZ, {wire, 0}, {theta, 0, 0}}; }
  static GateOp rot(int wire, double phi, double theta, double omega) {
    return {GateKind::Rot, {wire, 0}, {phi, theta, omega}};
  }
  static GateOp cnot(int control, int target) { return {GateKind::CNOT, {control, target}, {}}; }

  int wire_count() const { return kind == GateKind::CNOT ? 2 : 1; }
  int angle_count() const;
  Mat2 matrix() const;  // single-qubit kinds only

  /// The gate that undoes this one: negated angles in reverse order; CNOT is its own inverse.
  GateOp inverse() const;
};

const char* gate_name(GateKind kind);
GateKind parse_gate_kind(const std::string& name);

enum class Entangler { Ring, Chain };

const char* entangler_name(Entangler e);
Entangler parse_entangler(const std::string& name);

struct CircuitSpec {
  int n_qubits = 1;
  int depth = 0;
  Entangler entangler = Entangler::Ring;

  std::size_t weight_count() const {
    return static_cast<std::size_t>(depth) * static_cast<std::size_t>(n_qubits) * 3;
  }
  void validate() const;
  /// CNOT (control, target) pairs applied after the Rot layer.
  std::vector<std::pair<int, int>> entangler_pairs() const;
};

/// Index of weights[layer][qubit][angle] in the flat row-major weight vector.
inline std::size_t weight_index(const CircuitSpec& spec, int layer, int qubit, int angle) {
  return (static_cast<std::size_t>(layer) * spec.n_qubits + qubit) * 3 + angle;
}

Statevector init_state(int n_qubits);

/// Throws IndexError on bad wires and ConfigError on bad angle counts.
void validate_gate(const GateOp& op, int n_qubits);

void apply_gate_inplace(Statevector& state, const GateOp& op);
Statevector apply_gate(Statevector state, const GateOp& op);

double expval_z(const Statevector& state, int wire);

/// RX(inputs[q]) on every wire, then per layer a Rot on every wire followed by the entangler.
std::vector<GateOp> build_circuit(std::span<const double> inputs, std::span<const double> weights,
                                  const CircuitSpec& spec);

/// Executes build_circuit from |0...0> and returns <Z> per wire.
std::vector<double> run_vqc(std::span<const double> inputs, std::span<const double> weights,
                            const CircuitSpec& spec);

struct VqcGradient {
  std::vector<double> inputs;
  std::vector<double> weights;
};

/// Vector-Jacobian product of run_vqc by the parameter-shift rule: every rotation
/// angle a (encoding and variational) is shifted by +-pi/2 and
/// d<Z_q>/da = (f(a + pi/2) - f(a - pi/2)) / 2, contracted with `upstream`.
VqcGradient param_shift_grad(std::span<const double> inputs, std::span<const double> weights,
                             const CircuitSpec& spec, std::span<const double> upstream);

}  // namespace qfl::qc
