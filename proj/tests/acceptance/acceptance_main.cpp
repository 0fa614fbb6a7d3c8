// SPDX-License-Identifier: Apache-2.0
// Acceptance runner: one PASS/FAIL line per criterion, exit status 1 if any fail.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "oracles.hpp"
#include "qfl/common/error.hpp"
#include "qfl/fed/fedransel.hpp"
#include "qfl/fed/federation.hpp"
#include "qfl/harness/compare.hpp"
#include "qfl/harness/config.hpp"
#include "qfl/harness/experiment.hpp"
#include "qfl/harness/metrics.hpp"
#include "qfl/nn/loss.hpp"
#include "qfl/qcircuit/circuit.hpp"
#include "qfl/qlstm/model.hpp"
#include "qfl/threat/dp.hpp"
#include "qfl/threat/poison.hpp"

using namespace qfl;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  std::string name;
  double budget_s;
  std::function<Outcome()> run;
};

std::string fmt(double v, int prec = 4) {
  std::ostringstream s;
  s.precision(prec);
  s << v;
  return s.str();
}

double median(std::vector<double> v) {
  if (v.empty()) return std::nan("");
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

std::vector<double> random_vec(Rng& rng, std::size_t n, double lo, double hi) {
  std::vector<double> v(n);
  for (auto& x : v) x = uniform(rng, lo, hi);
  return v;
}

// ---- 1: simulator against full unitary products

Outcome circuit_oracle() {
  Rng rng(101);
  double worst = 0;
  for (int c = 0; c < 200; ++c) {
    const int n = 1 + static_cast<int>(uniform_index(rng, 4));
    const int depth = static_cast<int>(uniform_index(rng, 4));
    const bool ring = uniform_index(rng, 2) == 0;
    const qc::CircuitSpec spec{n, depth, ring ? qc::Entangler::Ring : qc::Entangler::Chain};
    const auto x = random_vec(rng, static_cast<std::size_t>(n), -M_PI, M_PI);
    const auto w = random_vec(rng, spec.weight_count(), -M_PI, M_PI);
    const auto got = qc::run_vqc(x, w, spec);
    const auto want = oracle::naive_expvals(oracle::naive_vqc_ops(x, w, n, depth, ring), n);
    for (int q = 0; q < n; ++q) worst = std::max(worst, std::abs(got[q] - want[q]));
  }
  return {worst <= 1e-9, "200 circuits, max |diff| = " + fmt(worst)};
}

// ---- 2: gradients against central differences

double worst_rel(std::span<const double> a, std::span<const double> b, double floor, bool& ok) {
  double worst = 0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (!oracle::close_rel(a[k], b[k], 1e-4, floor)) ok = false;
    const double scale = std::max(std::abs(a[k]), std::abs(b[k]));
    if (scale > 1e-6) worst = std::max(worst, std::abs(a[k] - b[k]) / scale);
  }
  return worst;
}

Outcome gradient_suite() {
  bool ok = true;
  double worst = 0;
  Rng rng(202);
  int checked = 0;
  for (int n = 1; n <= 4; ++n) {
    for (int depth = 0; depth <= 2; ++depth) {
      for (auto ent : {qc::Entangler::Ring, qc::Entangler::Chain}) {
        const qc::CircuitSpec spec{n, depth, ent};
        const auto x = random_vec(rng, static_cast<std::size_t>(n), -M_PI, M_PI);
        const auto w = random_vec(rng, spec.weight_count(), -M_PI, M_PI);
        const auto up = random_vec(rng, static_cast<std::size_t>(n), -1, 1);
        const auto g = qc::param_shift_grad(x, w, spec, up);
        auto dot = [&](const std::vector<double>& z) {
          double s = 0;
          for (int q = 0; q < n; ++q) s += up[q] * z[q];
          return s;
        };
        const auto fx = oracle::central_diff([&](std::span<const double> xs) { return dot(qc::run_vqc(xs, w, spec)); }, x, 1e-5);
        const auto fw = oracle::central_diff([&](std::span<const double> ws) { return dot(qc::run_vqc(x, ws, spec)); }, w, 1e-5);
        worst = std::max(worst, worst_rel(g.inputs, fx, 1e-8, ok));
        worst = std::max(worst, worst_rel(g.weights, fw, 1e-8, ok));
        ++checked;
      }
    }
  }

  struct ModelCase {
    lstm::ModelKind kind;
    int d, H, n, depth, L;
  };
  const ModelCase cases[] = {{lstm::ModelKind::Qlstm, 2, 2, 2, 1, 2},
                             {lstm::ModelKind::Qlstm, 3, 2, 3, 2, 3},
                             {lstm::ModelKind::Qlstm, 3, 3, 4, 2, 3},
                             {lstm::ModelKind::Lstm, 3, 4, 1, 0, 3}};
  for (const auto& mc : cases) {
    lstm::ModelConfig cfg;
    cfg.kind = mc.kind;
    cfg.input_dim = mc.d;
    cfg.hidden_dim = mc.H;
    cfg.n_qubits = mc.n;
    cfg.depth = mc.depth;
    cfg.seq_len = mc.L;
    auto model = lstm::make_model(cfg, 7 + static_cast<std::uint64_t>(checked));
    const auto seq = random_vec(rng, static_cast<std::size_t>(mc.d * mc.L), -1, 1);
    const lstm::SequenceView v{seq, mc.L, mc.d};
    std::vector<double> grad(model->param_count(), 0.0);
    model->backward(model->forward_trace(v), 1.0, grad);
    const std::vector<double> p(model->params().values().begin(), model->params().values().end());
    auto probe = model->clone();
    const auto fd = oracle::central_diff(
        [&](std::span<const double> w) {
          std::copy(w.begin(), w.end(), probe->params().values().begin());
          return probe->forward(v);
        },
        p, 1e-5);
    worst = std::max(worst, worst_rel(grad, fd, 1e-7, ok));
    ++checked;
  }
  return {ok, std::to_string(checked) + " configurations, worst relative error " + fmt(worst)};
}

// ---- 3: exact identities

Outcome exact_checks() {
  std::vector<std::string> failed;
  auto need = [&](bool cond, const std::string& what) {
    if (!cond) failed.push_back(what);
  };

  // Injected gate values.
  for (auto kind : {lstm::ModelKind::Qlstm, lstm::ModelKind::Lstm}) {
    lstm::ModelConfig cfg;
    cfg.kind = kind;
    cfg.input_dim = 3;
    cfg.hidden_dim = 2;
    cfg.n_qubits = 3;
    cfg.depth = 1;
    cfg.seq_len = 1;
    auto model = lstm::make_model(cfg, 1);
    const lstm::CellState prev{{0.3, -0.2}, {5.0, -7.0}};
    const std::vector<double> x{0.1, 0.2, 0.3};
    lstm::GateOverride ov;
    ov.values[lstm::kForget] = std::vector<double>{0.0, 0.0};
    ov.values[lstm::kInput] = std::vector<double>{1.0, 1.0};
    auto step = model->cell_forward(x, prev, &ov);
    for (int k = 0; k < 2; ++k) need(step.state.c[k] == step.record.gates[lstm::kCandidate][k], "f=0,i=1 gives c=g");
    lstm::GateOverride ov2;
    ov2.values[lstm::kOutput] = std::vector<double>{1.0, 1.0};
    step = model->cell_forward(x, prev, &ov2);
    for (int k = 0; k < 2; ++k) need(step.state.h[k] == std::tanh(step.state.c[k]), "o=1 gives h=tanh(c)");
    lstm::GateOverride ov3;
    ov3.values[lstm::kForget] = std::vector<double>{1.0, 1.0};
    ov3.values[lstm::kInput] = std::vector<double>{0.0, 0.0};
    step = model->cell_forward(x, prev, &ov3);
    for (int k = 0; k < 2; ++k) need(step.state.c[k] == prev.c[k], "f=1,i=0 keeps c");
  }

  // Loss closed forms.
  const double ln2 = std::log(2.0);
  need(std::abs(nn::bce_single(0.0, 1) - ln2) <= 1e-15, "BCE(0,1) = ln 2");
  need(std::abs(nn::bce_single(0.0, 0) - ln2) <= 1e-15, "BCE(0,0) = ln 2");
  const std::vector<double> z4(4, 0.0);
  const std::vector<int> y4{1, 0, 1, 0};
  const auto lv = nn::bce_with_logits(z4, y4);
  need(std::abs(lv.value - ln2) <= 1e-15, "mean BCE at zero logits = ln 2");
  need(lv.grad[0] == -0.125 && lv.grad[1] == 0.125, "BCE gradient at zero logits");
  need(std::abs(nn::bce_single(std::log(3.0), 1) - std::log(4.0 / 3.0)) <= 1e-15, "BCE(ln 3, 1) = ln(4/3)");
  need(std::isfinite(nn::bce_single(800.0, 0)) && std::abs(nn::bce_single(800.0, 0) - 800.0) <= 1e-12,
       "BCE stable for large logits");

  // Sampling cardinalities.
  Rng rng(303);
  for (std::size_t size : {1u, 7u, 100u, 417u}) {
    nn::ParamStore store;
    store.add_tensor("m", "w", size);
    for (double tl : {0.1, 0.5, 0.8, 1.0}) {
      for (int t = 0; t < 200; ++t) {
        const auto s = fed::sample_local(store, 0, tl, rng);
        need(s.entries.size() >= fed::sample_count(tl, size) && s.entries.size() <= size && !s.entries.empty(),
             "|S| within [ceil(T_l |P|), |P|]");
      }
    }
  }
  for (std::size_t c : {1u, 9u, 250u})
    for (double tg : {0.05, 0.5, 0.8, 1.0})
      need(fed::sample_count(tg, c) == static_cast<std::size_t>(std::ceil(tg * static_cast<double>(c) - 1e-9)),
           "|G_f| = ceil(T_g |C|)");

  // Set algebra: G_f within averaged, averaged over exactly C, C within every S_i.
  for (int trial = 0; trial < 200; ++trial) {
    nn::ParamStore store;
    store.add_tensor("m", "w", 60);
    std::vector<fed::SharedSubset> subs;
    const int nodes = 2 + static_cast<int>(uniform_index(rng, 4));
    for (int i = 0; i < nodes; ++i) {
      for (auto& v : store.values()) v = uniform(rng, -1, 1);
      subs.push_back(fed::sample_local(store, i, 0.6, rng));
    }
    auto merge = fed::merge_common(subs);
    fed::sample_global(merge, 0.7, rng);
    std::set<std::string> inter;
    for (const auto& [id, v] : subs[0].entries) {
      bool all = true;
      for (const auto& s : subs) all = all && s.entries.count(id);
      if (all) inter.insert(id);
    }
    need(std::set<std::string>(merge.common.begin(), merge.common.end()) == inter, "C is the intersection");
    need(merge.averaged.size() == merge.common.size(), "averaged covers C");
    for (const auto& [id, v] : merge.averaged) {
      double sum = 0;
      for (const auto& s : subs) sum += s.entries.at(id);
      need(inter.count(id) && v == sum / static_cast<double>(nodes), "averaged value is the node mean");
    }
    for (const auto& [id, v] : merge.final) need(merge.averaged.count(id) && merge.averaged.at(id) == v, "G_f within averaged");
    need(merge.final.size() == fed::sample_count(0.7, merge.common.size()), "|G_f| matches T_g");
  }

  if (failed.empty()) return {true, "gate injection, loss closed forms, cardinalities, containment chain"};
  std::sort(failed.begin(), failed.end());
  failed.erase(std::unique(failed.begin(), failed.end()), failed.end());
  std::string msg = "failed:";
  for (const auto& f : failed) msg += " [" + f + "]";
  return {false, msg};
}

// ---- 4: FedRansel at x = 1, T_g = 1 against FedAvg

std::vector<fed::FederationNode> degeneracy_nodes(int n, std::uint64_t seed) {
  lstm::ModelConfig mc;
  mc.input_dim = 3;
  mc.hidden_dim = 2;
  mc.n_qubits = 2;
  mc.depth = 1;
  mc.seq_len = 2;
  std::vector<fed::FederationNode> nodes;
  Rng rng(seed);
  for (int i = 0; i < n; ++i) {
    fed::FederationNode node;
    node.model = lstm::make_model(mc, seed * 97 + static_cast<std::uint64_t>(i));
    node.train = lstm::SequenceSet(2, 3);
    for (int k = 0; k < 30; ++k) {
      const int y = static_cast<int>(uniform_index(rng, 2));
      auto w = random_vec(rng, 6, -1, 1);
      w[5] += y ? 0.7 : -0.7;
      node.train.add(w, y);
    }
    nodes.push_back(std::move(node));
  }
  return nodes;
}

Outcome fedavg_degeneracy() {
  double worst = 0;
  for (std::uint64_t seed : {11u, 12u, 13u}) {
    auto a = degeneracy_nodes(3, seed), b = degeneracy_nodes(3, seed);
    fed::FederationConfig cfg;
    cfg.n_nodes = 3;
    cfg.rounds = 3;
    cfg.local_epochs = 2;
    cfg.seed = seed;
    cfg.t_global = 1.0;
    cfg.forced_share_fraction = 1.0;
    cfg.aggregation = fed::Aggregation::FedRansel;
    lstm::TrainOptions opts;
    opts.batch_size = 8;
    fed::run_federation(cfg, opts, a);
    cfg.aggregation = fed::Aggregation::FedAvg;
    cfg.forced_share_fraction.reset();
    fed::run_federation(cfg, opts, b);
    for (int i = 0; i < 3; ++i) {
      const auto va = a[i].model->params().values(), vb = b[i].model->params().values();
      for (std::size_t k = 0; k < va.size(); ++k) worst = std::max(worst, std::abs(va[k] - vb[k]));
    }
  }
  return {worst <= 1e-12, "3 seeds x 3 rounds, max |diff| = " + fmt(worst)};
}

// ---- 5-7: statistical learning and threat checks

harness::ExperimentConfig load_config(const fs::path& dir, const std::string& name) {
  return harness::ExperimentConfig::load(dir / name);
}

std::string list(const std::vector<double>& v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + fmt(v[i], 3);
  return s + "]";
}

Outcome learning_check(const fs::path& configs) {
  const auto cfg = load_config(configs, "learning.json");
  std::vector<double> acc, auc;
  for (auto seed : cfg.seeds) {
    const auto r = harness::run_single(cfg, seed);
    if (!r.ok) return {false, "seed " + std::to_string(seed) + " failed: " + r.error};
    acc.push_back(r.mean.accuracy);
    auc.push_back(r.mean.auc);
  }
  const double ma = median(acc), mu = median(auc);
  return {ma >= 0.85 && mu >= 0.90,
          "median accuracy " + fmt(ma) + " (>= 0.85) " + list(acc) + ", median AUC " + fmt(mu) + " (>= 0.90) " + list(auc)};
}

std::vector<double> accuracy_drops(const harness::AttackOutcome& o) {
  std::vector<double> d;
  for (std::size_t i = 0; i < o.clean.size(); ++i) d.push_back(o.clean[i].mean.accuracy - o.attacked[i].mean.accuracy);
  return d;
}

bool all_ok(const harness::AttackOutcome& o, std::string& err) {
  for (const auto* side : {&o.clean, &o.attacked})
    for (const auto& r : *side)
      if (!r.ok) {
        err = "seed " + std::to_string(r.seed) + " failed: " + r.error;
        return false;
      }
  return true;
}

Outcome poisoning_check(const fs::path& configs) {
  auto cfg = load_config(configs, "poisoning.json");
  cfg.attack.defense = harness::Defense::None;
  const auto plain = harness::evaluate_attack(cfg);
  cfg.attack.defense = harness::Defense::FedRansel;
  const auto ransel = harness::evaluate_attack(cfg);
  std::string err;
  if (!all_ok(plain, err) || !all_ok(ransel, err)) return {false, err};
  // Scored on the honest nodes' models; the adversary's own models are not what a defense protects.
  const auto& bad = cfg.attack.poison.malicious_nodes;
  auto honest_drops = [&](const harness::AttackOutcome& o) {
    harness::AttackOutcome h = o;
    h.clean = harness::restrict_to_nodes(o.clean, bad);
    h.attacked = harness::restrict_to_nodes(o.attacked, bad);
    return accuracy_drops(h);
  };
  const auto hp = honest_drops(plain), hr = honest_drops(ransel);
  const double mp = median(hp), mr = median(hr);
  const double ap = median(accuracy_drops(plain)), ar = median(accuracy_drops(ransel));
  return {mp >= 0.05 && mr <= mp, "honest-node median accuracy drop FedAvg " + fmt(mp) + " (>= 0.05) " + list(hp) +
                                      ", FedRansel " + fmt(mr) + " (<= FedAvg) " + list(hr) +
                                      "; all-node medians FedAvg " + fmt(ap) + ", FedRansel " + fmt(ar)};
}

Outcome inference_check(const fs::path& configs) {
  auto cfg = load_config(configs, "inference.json");
  cfg.attack.membership_inference = true;
  auto attack_accuracies = [&](harness::Defense d, std::string& err) {
    cfg.attack.defense = d;
    std::vector<double> out;
    for (auto seed : cfg.seeds) {
      const auto r = harness::run_single(cfg, seed);
      if (!r.ok || !r.inference) {
        err = "seed " + std::to_string(seed) + " failed: " + r.error;
        return out;
      }
      out.push_back(r.inference->observed.attack_accuracy);
    }
    return out;
  };
  std::string err;
  const auto plain = attack_accuracies(harness::Defense::None, err);
  if (!err.empty()) return {false, err};
  const auto ransel = attack_accuracies(harness::Defense::FedRansel, err);
  if (!err.empty()) return {false, err};
  const double mp = median(plain), mr = median(ransel);
  return {mp > 0.55 && mr <= mp, "median attack accuracy FedAvg " + fmt(mp) + " (> 0.55) " + list(plain) +
                                     ", FedRansel " + fmt(mr) + " (<= FedAvg) " + list(ransel)};
}

// ---- 8: sampling and noise distributions

Outcome statistical_oracles() {
  std::vector<std::string> notes;
  double worst_z = 0;
  bool ok = true;
  auto check = [&](const std::string& what, double observed, double expected, double sigma) {
    const double z = std::abs(observed - expected) / sigma;
    worst_z = std::max(worst_z, z);
    if (z > 3) {
      ok = false;
      notes.push_back(what + " z=" + fmt(z, 3));
    }
  };
  const int draws = 10000;
  Rng rng(808);

  // Local inclusion: fixed fraction, every parameter equally likely.
  {
    nn::ParamStore store;
    store.add_tensor("m", "w", 20);
    std::vector<int> hits(20, 0);
    for (int t = 0; t < draws; ++t)
      for (const auto& [id, v] : fed::sample_local(store, 0, 0.5, rng, 0.5).entries)
        ++hits[std::stoul(id.substr(id.rfind('/') + 1))];
    // Without-replacement draws of 10 of 20: per-element Bernoulli(0.5).
    for (int k = 0; k < 20; ++k) check("local inclusion", hits[k], draws * 0.5, std::sqrt(draws * 0.25));
  }
  // Local fraction x ~ U(T_l, 1].
  {
    const double tl = 0.8;
    double sum = 0, sq = 0;
    for (int t = 0; t < draws; ++t) {
      const double x = fed::draw_share_fraction(tl, rng);
      if (!(x > tl && x <= 1.0)) ok = false;
      sum += x;
      sq += x * x;
    }
    const double width = 1 - tl, var = width * width / 12;
    check("share fraction mean", sum / draws, (1 + tl) / 2, std::sqrt(var / draws));
    // Var of the sample second moment for a uniform: E[x^4] - E[x^2]^2.
    const double m2 = (1 - tl * tl * tl) / (3 * width);
    const double m4 = (1 - std::pow(tl, 5)) / (5 * width);
    check("share fraction second moment", sq / draws, m2, std::sqrt((m4 - m2 * m2) / draws));
  }
  // Global sample: uniform over the averaged set.
  {
    fed::GlobalMerge base;
    for (int k = 0; k < 20; ++k) {
      const std::string id = "m/w/" + std::to_string(k);
      base.common.push_back(id);
      base.averaged.emplace(id, 0.0);
    }
    std::vector<int> hits(20, 0);
    for (int t = 0; t < draws; ++t) {
      auto m = base;
      fed::sample_global(m, 0.25, rng);
      for (const auto& [id, v] : m.final) ++hits[std::stoul(id.substr(id.rfind('/') + 1))];
    }
    for (int k = 0; k < 20; ++k) check("global inclusion", hits[k], draws * 0.25, std::sqrt(draws * 0.25 * 0.75));
  }
  // Centered Poisson perturbation.
  {
    const double lambda = 0.1;
    const std::size_t n = 100000;
    std::vector<double> v(n, 0.0);
    threat::poison_values(v, lambda, true, rng);
    double mean = 0;
    for (double x : v) mean += x;
    mean /= n;
    double var = 0;
    for (double x : v) var += (x - mean) * (x - mean);
    var /= (n - 1);
    check("poisson mean", mean, 0.0, std::sqrt(lambda / n));
    check("poisson variance", var, lambda, std::sqrt((lambda + 2 * lambda * lambda) / n));
  }
  // Gaussian server noise.
  {
    const std::size_t n = 20000;
    fed::ParamMap delta;
    for (std::size_t k = 0; k < n; ++k) delta.emplace("k" + std::to_string(k), 0.0);
    threat::DPConfig cfg{5.0, 0.2};
    const auto out = threat::dp_defend(delta, cfg, rng);
    double mean = 0, var = 0;
    for (const auto& [id, v] : out) mean += v;
    mean /= n;
    for (const auto& [id, v] : out) var += (v - mean) * (v - mean);
    var /= (n - 1);
    check("gaussian mean", mean, 0.0, 0.2 / std::sqrt(n));
    check("gaussian variance", var, 0.04, 0.04 * std::sqrt(2.0 / (n - 1)));
  }
  // Binomial label flips.
  {
    std::vector<int> y(draws);
    for (int i = 0; i < draws; ++i) y[i] = i % 2;
    const auto out = threat::flip_labels(y, 0.8, rng);
    int flipped = 0;
    for (int i = 0; i < draws; ++i) flipped += out[i] != y[i];
    check("flip count", flipped, draws * 0.8, std::sqrt(draws * 0.8 * 0.2));
  }
  std::string detail = "max |z| = " + fmt(worst_z, 3);
  for (const auto& n : notes) detail += "; " + n;
  return {ok, detail};
}

// ---- 9: AUC against pair counting

Outcome auc_oracle() {
  Rng rng(909);
  int mismatches = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 + uniform_index(rng, 999);
    std::vector<double> s(n);
    std::vector<int> y(n);
    const bool coarse = trial % 2 == 0;
    for (std::size_t i = 0; i < n; ++i) {
      s[i] = coarse ? static_cast<double>(uniform_index(rng, 15)) : uniform(rng, -5, 5);
      y[i] = uniform01(rng) < 0.3 ? 1 : 0;
    }
    y[0] = 1;
    y[1] = 0;
    if (harness::auc_rank_sum(s, y) != oracle::auc_pairs(s, y)) ++mismatches;
  }
  return {mismatches == 0, "100 sets, " + std::to_string(mismatches) + " mismatches"};
}

// ---- 10: byte-identical reruns of every command

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<fs::path> files_under(const fs::path& dir) {
  std::vector<fs::path> out;
  if (!fs::exists(dir)) return out;
  for (const auto& e : fs::recursive_directory_iterator(dir))
    if (e.is_regular_file()) out.push_back(fs::relative(e.path(), dir));
  std::sort(out.begin(), out.end());
  return out;
}

Outcome reproducibility(const fs::path& configs, const fs::path& work) {
  struct Command {
    std::string name;
    std::string args;
  };
  const std::string smoke = (configs / "smoke.json").string();
  const std::vector<Command> commands = {
      {"prepare-data", "--config " + smoke + " --seed 7"},
      {"train", "--config " + smoke + " --seed 7"},
      {"sweep", "--config " + smoke + " --seed 7 --workers 2"},
      {"compare", "--config " + smoke + " --seed 7"},
      {"attack-eval", "--config " + smoke + " --seed 7"},
      {"circuit-eval", "--config " + (configs / "circuit.json").string()},
  };
  std::size_t compared = 0;
  for (const auto& c : commands) {
    std::vector<fs::path> dirs;
    for (int rep = 0; rep < 2; ++rep) {
      const fs::path out = work / "repro" / c.name / ("run" + std::to_string(rep));
      fs::remove_all(out);
      const std::string cmd = std::string("\"") + QFL_CLI_PATH + "\" " + c.name + " " + c.args + " --out \"" +
                              out.string() + "\" > \"" + (work / "repro_stdout.txt").string() + "\" 2>&1";
      if (std::system(cmd.c_str()) != 0) return {false, c.name + " exited non-zero"};
      dirs.push_back(out);
    }
    const auto a = files_under(dirs[0]), b = files_under(dirs[1]);
    if (a.empty()) return {false, c.name + " wrote no files"};
    if (a != b) return {false, c.name + " wrote different file sets"};
    for (const auto& f : a) {
      if (slurp(dirs[0] / f) != slurp(dirs[1] / f)) return {false, c.name + ": " + f.string() + " differs"};
      ++compared;
    }
  }
  return {true, std::to_string(commands.size()) + " commands, " + std::to_string(compared) + " files identical"};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qfl acceptance checks"};
  std::string work = "acceptance_work";
  std::string configs = QFL_CONFIG_DIR;
  std::vector<int> only;
  app.add_option("--work-dir", work, "Scratch directory for CLI reruns");
  app.add_option("--configs", configs, "Directory holding the experiment configs")->check(CLI::ExistingDirectory);
  app.add_option("--only", only, "Run only these criteria");
  CLI11_PARSE(app, argc, argv);
  fs::create_directories(work);

  const std::vector<Criterion> criteria = {
      {1, "simulator vs unitary oracle", 10, circuit_oracle},
      {2, "gradients vs finite differences", 120, gradient_suite},
      {3, "exact identities", 10, exact_checks},
      {4, "FedAvg degeneracy", 30, fedavg_degeneracy},
      {5, "federated learning", 15 * 60, [&] { return learning_check(configs); }},
      {6, "poisoning directionality", 45 * 60, [&] { return poisoning_check(configs); }},
      {7, "inference directionality", 30 * 60, [&] { return inference_check(configs); }},
      {8, "statistical oracles", 60, statistical_oracles},
      {9, "AUC oracle", 5, auc_oracle},
      {10, "reproducibility", 600, [&] { return reproducibility(configs, work); }},
  };

  std::ofstream report(fs::path(work) / "acceptance_report.txt");
  int failures = 0;
  for (const auto& c : criteria) {
    if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end()) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs > c.budget_s) {
      o.pass = false;
      o.detail += "; over the " + fmt(c.budget_s) + " s budget";
    }
    if (!o.pass) ++failures;
    char line[2048];
    std::snprintf(line, sizeof(line), "criterion %2d %s  %s: %s (%.1f s)\n", c.id, o.pass ? "PASS" : "FAIL",
                  c.name.c_str(), o.detail.c_str(), secs);
    std::fputs(line, stdout);
    std::fflush(stdout);
    report << line << std::flush;
  }
  return failures == 0 ? 0 : 1;
}
