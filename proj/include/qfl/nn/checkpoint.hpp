// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <string>

#include "qfl/nn/param_store.hpp"

namespace qfl::nn {

// Checkpoint format (JSON):
//   {"format": "qfl-params/1", "params": [["in_map/weight/0", 0.123], ...]}
// Pairs appear in store order; values are written with round-trip precision.

std::string checkpoint_to_string(const ParamStore& store);

/// Overwrites values in `store`. The checkpoint must list exactly the store's IDs in order.
void checkpoint_from_string(ParamStore& store, const std::string& text);

void save_checkpoint(const ParamStore& store, const std::filesystem::path& path);
void load_checkpoint(ParamStore& store, const std::filesystem::path& path);

}  // namespace qfl::nn
