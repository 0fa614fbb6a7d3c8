// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <string_view>

namespace qfl {

using Rng = std::mt19937_64;

/// Derives an independent, reproducible stream from a run seed and a tag path,
/// e.g. derive_rng(seed, "node-train", 3). Streams do not depend on scheduling.
Rng derive_rng(std::uint64_t seed, std::string_view tag, std::uint64_t index = 0);

std::uint64_t derive_seed(std::uint64_t seed, std::string_view tag, std::uint64_t index = 0);

/// 64-bit FNV-1a.
std::uint64_t stable_hash(std::string_view bytes);

/// Uniform double in [0, 1) from the top 53 bits.
inline double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

inline double uniform(Rng& rng, double lo, double hi) { return lo + (hi - lo) * uniform01(rng); }

/// Uniform integer in [0, n).
std::uint64_t uniform_index(Rng& rng, std::uint64_t n);

}  // namespace qfl
