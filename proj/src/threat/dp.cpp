// SPDX-License-Identifier: Apache-2.0
#include "qfl/threat/dp.hpp"

#include <cmath>
#include <random>

#include "qfl/common/error.hpp"

namespace qfl::threat {

void DPConfig::validate() const {
  if (!(norm_bound > 0)) throw ConfigError("dp norm_bound must be positive");
  if (!(noise_scale > 0)) throw ConfigError("dp noise_scale must be positive");
}

double l2_norm(const fed::ParamMap& m) {
  double acc = 0.0;
  for (const auto& [id, v] : m) acc += v * v;
  return std::sqrt(acc);
}

void clip_to_norm(fed::ParamMap& delta, double bound) {
  const double norm = l2_norm(delta);
  if (norm <= bound) return;
  const double scale = bound / norm;
  for (auto& [id, v] : delta) v *= scale;
}

fed::ParamMap dp_defend(fed::ParamMap delta, const DPConfig& cfg, Rng& rng) {
  cfg.validate();
  if (delta.empty()) throw ConfigError("dp defense needs a non-empty update");
  clip_to_norm(delta, cfg.norm_bound);
  std::normal_distribution<double> noise(0.0, cfg.noise_scale);
  for (auto& [id, v] : delta) v += noise(rng);
  return delta;
}

}  // namespace qfl::threat
