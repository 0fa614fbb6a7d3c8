// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "json.hpp"

namespace qfl::harness {

/// Evaluates a circuit description and returns {"expvals": [<Z_0>, ...]}.
/// Accepted inputs:
///   {"n_qubits": 2, "gates": [{"kind": "RX", "wires": [0], "angles": [0.3]},
///                             {"kind": "CNOT", "wires": [0, 1]}]}
///   {"n_qubits": 2, "depth": 1, "entangler": "ring", "inputs": [...], "weights": [...],
///    "upstream": [...]}
/// The second form also reports parameter-shift gradients ("grad_inputs",
/// "grad_weights") contracted with "upstream" when it is present.
nlohmann::json circuit_eval(const nlohmann::json& request);

}  // namespace qfl::harness
