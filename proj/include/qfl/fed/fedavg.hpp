// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>

#include "qfl/nn/param_store.hpp"

namespace qfl::fed {

/// Replaces every parameter on every node with the unweighted cross-node mean.
/// All stores must share one ID space (ProtocolError otherwise).
void fedavg_round(std::span<nn::ParamStore* const> stores);

}  // namespace qfl::fed
