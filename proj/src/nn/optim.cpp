// SPDX-License-Identifier: Apache-2.0
#include "qfl/nn/optim.hpp"

#include <cmath>

#include "qfl/common/error.hpp"

namespace qfl::nn {

namespace {

void check_finite(const ParamStore& store) {
  const auto g = store.grads();
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (!std::isfinite(g[i])) throw DivergenceError("non-finite gradient for " + store.id(i));
  }
}

}  // namespace

OptimizerKind parse_optimizer(const std::string& name) {
  if (name == "adam") return OptimizerKind::Adam;
  if (name == "sgd") return OptimizerKind::Sgd;
  throw ConfigError("unknown optimizer: " + name);
}

const char* optimizer_name(OptimizerKind k) { return k == OptimizerKind::Adam ? "adam" : "sgd"; }

void sgd_step(ParamStore& store, double lr) {
  if (!(lr > 0)) throw ConfigError("learning rate must be positive");
  check_finite(store);
  auto p = store.values();
  auto g = store.grads();
  for (std::size_t i = 0; i < p.size(); ++i) p[i] -= lr * g[i];
  store.zero_grad();
}

void adam_step(ParamStore& store, const AdamOptions& o) {
  if (!(o.lr > 0)) throw ConfigError("learning rate must be positive");
  check_finite(store);
  store.set_step_count(store.step_count() + 1);
  const double t = static_cast<double>(store.step_count());
  const double c1 = 1.0 - std::pow(o.beta1, t);
  const double c2 = 1.0 - std::pow(o.beta2, t);
  auto p = store.values();
  auto g = store.grads();
  auto m = store.first_moment();
  auto v = store.second_moment();
  for (std::size_t i = 0; i < p.size(); ++i) {
    m[i] = o.beta1 * m[i] + (1 - o.beta1) * g[i];
    v[i] = o.beta2 * v[i] + (1 - o.beta2) * g[i] * g[i];
    const double mhat = m[i] / c1;
    const double vhat = v[i] / c2;
    p[i] -= o.lr * mhat / (std::sqrt(vhat) + o.eps);
  }
  store.zero_grad();
}

void optimizer_step(ParamStore& store, const OptimizerConfig& cfg) {
  if (cfg.kind == OptimizerKind::Adam) {
    adam_step(store, AdamOptions{.lr = cfg.lr});
  } else {
    sgd_step(store, cfg.lr);
  }
}

}  // namespace qfl::nn
