// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qfl/common/rng.hpp"
#include "qfl/nn/param_store.hpp"

namespace qfl::fed {

/// Parameter values keyed by ParamId. Ordered, so iteration and serialization are stable.
using ParamMap = std::map<std::string, double>;

/// The values one node sends to the server in a round.
struct SharedSubset {
  int node_id = 0;
  ParamMap entries;
};

/// Server-side scratch for one round; discarded once the round ends.
struct GlobalMerge {
  std::vector<std::string> common;  // IDs shared by every node
  ParamMap averaged;                // unweighted cross-node mean over `common`
  ParamMap final;                   // the sampled part of `averaged` that is broadcast
};

/// ceil(fraction * total), computed so that exact products like 0.8 * 5 are not
/// pushed up by floating-point residue.
std::size_t sample_count(double fraction, std::size_t total);

/// Share fraction x ~ Uniform(t_local, 1]; t_local = 1 yields exactly 1.
double draw_share_fraction(double t_local, Rng& rng);

/// Shares ceil(x * |M|) distinct parameters chosen uniformly without replacement.
/// `forced_fraction` bypasses the draw of x (tests and the FedAvg degeneracy check).
SharedSubset sample_local(const nn::ParamStore& store, int node_id, double t_local, Rng& rng,
                          std::optional<double> forced_fraction = std::nullopt);

/// Intersects the subsets' key sets and averages each common key across nodes.
/// An empty intersection is a legal result meaning "skip the global update".
GlobalMerge merge_common(std::span<const SharedSubset> subsets);

/// Fills merge.final with ceil(t_global * |averaged|) keys drawn uniformly without replacement.
void sample_global(GlobalMerge& merge, double t_global, Rng& rng);

/// Overwrites the listed entries; unknown IDs raise ProtocolError before anything is written.
void apply_update(nn::ParamStore& store, const ParamMap& update);

}  // namespace qfl::fed
