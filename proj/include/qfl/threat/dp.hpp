// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "qfl/common/rng.hpp"
#include "qfl/fed/fedransel.hpp"

namespace qfl::threat {

/// Central DP baseline applied to the aggregated update at the server.
struct DPConfig {
  double norm_bound = 5.0;
  double noise_scale = 0.2;  // Gaussian standard deviation per entry

  void validate() const;
};

double l2_norm(const fed::ParamMap& m);

/// Scales `delta` onto the L2 ball of radius `bound` when it lies outside.
void clip_to_norm(fed::ParamMap& delta, double bound);

/// Clip, then add i.i.d. N(0, noise_scale^2) to every entry.
fed::ParamMap dp_defend(fed::ParamMap delta, const DPConfig& cfg, Rng& rng);

}  // namespace qfl::threat
