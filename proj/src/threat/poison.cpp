// SPDX-License-Identifier: Apache-2.0
#include "qfl/threat/poison.hpp"

#include <random>

#include "qfl/common/error.hpp"

namespace qfl::threat {

PoisonKind parse_poison_kind(const std::string& name) {
  if (name == "none") return PoisonKind::None;
  if (name == "label_flip") return PoisonKind::LabelFlip;
  if (name == "model_noise") return PoisonKind::ModelNoise;
  throw ConfigError("unknown attack kind: " + name);
}

const char* poison_kind_name(PoisonKind k) {
  switch (k) {
    case PoisonKind::None: return "none";
    case PoisonKind::LabelFlip: return "label_flip";
    case PoisonKind::ModelNoise: return "model_noise";
  }
  return "?";
}

void PoisonConfig::validate(int n_nodes) const {
  if (!(flip_prob >= 0 && flip_prob <= 1)) throw ConfigError("flip_prob must lie in [0, 1]");
  if (!(lambda > 0)) throw ConfigError("lambda must be positive");
  for (int id : malicious_nodes) {
    if (id < 0 || id >= n_nodes) throw ConfigError("malicious node id out of range: " + std::to_string(id));
  }
  if (static_cast<int>(malicious_nodes.size()) >= n_nodes) {
    throw ConfigError("at least one node must be honest");
  }
}

std::vector<int> flip_labels(std::span<const int> labels, double flip_prob, Rng& rng) {
  if (!(flip_prob >= 0 && flip_prob <= 1)) throw ConfigError("flip_prob must lie in [0, 1]");
  std::vector<int> out(labels.begin(), labels.end());
  for (int& y : out) {
    if (y != 0 && y != 1) throw DataError("labels must be binary");
    if (uniform01(rng) < flip_prob) y = 1 - y;
  }
  return out;
}

void poison_values(std::span<double> values, double lambda, bool centered, Rng& rng) {
  if (!(lambda > 0)) throw ConfigError("lambda must be positive");
  std::poisson_distribution<int> poisson(lambda);
  const double shift = centered ? lambda : 0.0;
  for (double& v : values) v += static_cast<double>(poisson(rng)) - shift;
}

void poison_params(nn::ParamStore& store, double lambda, bool centered, Rng& rng) {
  poison_values(store.values(), lambda, centered, rng);
}

void poison_shared(fed::ParamMap& shared, double lambda, bool centered, Rng& rng) {
  if (!(lambda > 0)) throw ConfigError("lambda must be positive");
  std::poisson_distribution<int> poisson(lambda);
  const double shift = centered ? lambda : 0.0;
  for (auto& [id, v] : shared) v += static_cast<double>(poisson(rng)) - shift;
}

}  // namespace qfl::threat
