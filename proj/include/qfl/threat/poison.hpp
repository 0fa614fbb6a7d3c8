// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <set>
#include <span>
#include <string>
#include <vector>

#include "qfl/common/rng.hpp"
#include "qfl/fed/fedransel.hpp"
#include "qfl/nn/param_store.hpp"

namespace qfl::threat {

enum class PoisonKind { None, LabelFlip, ModelNoise };

PoisonKind parse_poison_kind(const std::string& name);
const char* poison_kind_name(PoisonKind k);

struct PoisonConfig {
  PoisonKind kind = PoisonKind::None;
  double flip_prob = 0.8;
  double lambda = 0.1;
  /// Subtract lambda from each Poisson draw so the perturbation has zero mean.
  bool centered = true;
  std::set<int> malicious_nodes;

  /// malicious_nodes must be valid ids and leave at least one honest node.
  void validate(int n_nodes) const;
};

/// Flips each label independently with probability flip_prob.
std::vector<int> flip_labels(std::span<const int> labels, double flip_prob, Rng& rng);

/// p <- p + (K - lambda) per entry with K ~ Poisson(lambda) (or p + K when not centered).
void poison_values(std::span<double> values, double lambda, bool centered, Rng& rng);
void poison_params(nn::ParamStore& store, double lambda, bool centered, Rng& rng);
void poison_shared(fed::ParamMap& shared, double lambda, bool centered, Rng& rng);

}  // namespace qfl::threat
