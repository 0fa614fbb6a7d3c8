// SPDX-License-Identifier: Apache-2.0
#include "qfl/harness/circuit_eval.hpp"

#include <vector>

#include "qfl/common/error.hpp"
#include "qfl/qcircuit/circuit.hpp"

namespace qfl::harness {

using nlohmann::json;

json circuit_eval(const json& request) {
  try {
    const int n = request.at("n_qubits").get<int>();
    if (request.contains("gates")) {
      qc::Statevector psi = qc::init_state(n);
      for (const auto& g : request.at("gates")) {
        qc::GateOp op;
        op.kind = qc::parse_gate_kind(g.at("kind").get<std::string>());
        const auto wires = g.at("wires").get<std::vector<int>>();
        const auto angles = g.value("angles", std::vector<double>{});
        if (static_cast<int>(wires.size()) != op.wire_count()) {
          throw ConfigError(std::string(qc::gate_name(op.kind)) + " takes " + std::to_string(op.wire_count()) +
                            " wire(s)");
        }
        if (static_cast<int>(angles.size()) != op.angle_count()) {
          throw ConfigError(std::string(qc::gate_name(op.kind)) + " takes " + std::to_string(op.angle_count()) +
                            " angle(s)");
        }
        for (std::size_t k = 0; k < wires.size(); ++k) op.wires[k] = wires[k];
        for (std::size_t k = 0; k < angles.size(); ++k) op.angles[k] = angles[k];
        qc::apply_gate_inplace(psi, op);
      }
      return {{"expvals", psi.expval_z_all()}};
    }
    qc::CircuitSpec spec{n, request.at("depth").get<int>(),
                         qc::parse_entangler(request.value("entangler", std::string("ring")))};
    const auto inputs = request.at("inputs").get<std::vector<double>>();
    const auto weights = request.at("weights").get<std::vector<double>>();
    json out{{"expvals", qc::run_vqc(inputs, weights, spec)}};
    if (request.contains("upstream")) {
      const auto upstream = request.at("upstream").get<std::vector<double>>();
      const auto g = qc::param_shift_grad(inputs, weights, spec, upstream);
      out["grad_inputs"] = g.inputs;
      out["grad_weights"] = g.weights;
    }
    return out;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed circuit description: ") + e.what());
  }
}

}  // namespace qfl::harness
