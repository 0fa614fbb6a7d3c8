// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>

#include "../support/oracles.hpp"
#include "qfl/common/error.hpp"
#include "qfl/harness/circuit_eval.hpp"
#include "qfl/harness/compare.hpp"
#include "qfl/harness/config.hpp"
#include "qfl/harness/experiment.hpp"
#include "qfl/harness/metrics.hpp"
#include "qfl/harness/sweep.hpp"
#include "qfl/qcircuit/circuit.hpp"

using namespace qfl;
using namespace qfl::harness;
namespace fs = std::filesystem;

namespace {

nlohmann::json smoke_json() {
  return nlohmann::json::parse(R"({
    "model": {"kind": "qlstm", "n_qubits": 2, "depth": 1, "seq_len": 2, "hidden_dim": 2},
    "training": {"optimizer": "adam", "lr": 0.02, "batch_size": 32},
    "federation": {"n_nodes": 2, "rounds": 2, "local_epochs": 1, "t_local": 0.5, "t_global": 0.5},
    "data": {"n_samples": 200, "n_features": 4},
    "seeds": [3]
  })");
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path scratch(const std::string& name) {
  auto p = fs::temp_directory_path() / ("qfl_harness_" + name);
  fs::remove_all(p);
  return p;
}

}  // namespace

TEST(Metrics, AucWorkedExample) {
  const std::vector<double> s{0.9, 0.8, 0.3, 0.1};
  const std::vector<int> y{1, 0, 1, 0};
  EXPECT_DOUBLE_EQ(auc_rank_sum(s, y), 0.75);
  const std::vector<int> perfect{1, 1, 0, 0};
  EXPECT_DOUBLE_EQ(auc_rank_sum(s, perfect), 1.0);
  const std::vector<int> inverted{0, 0, 1, 1};
  EXPECT_DOUBLE_EQ(auc_rank_sum(s, inverted), 0.0);
}

TEST(Metrics, AucTiesCountHalf) {
  const std::vector<double> s{0.5, 0.5, 0.5, 0.5};
  const std::vector<int> y{1, 0, 1, 0};
  EXPECT_DOUBLE_EQ(auc_rank_sum(s, y), 0.5);
}

TEST(Metrics, AucMatchesPairCounting) {
  Rng rng(21);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 + uniform_index(rng, 999);
    std::vector<double> s(n);
    std::vector<int> y(n);
    for (std::size_t i = 0; i < n; ++i) {
      // Coarse grid so ties occur.
      s[i] = static_cast<double>(uniform_index(rng, 20)) / 4.0;
      y[i] = uniform01(rng) < 0.4 ? 1 : 0;
    }
    y[0] = 1;
    y[1] = 0;
    EXPECT_EQ(auc_rank_sum(s, y), oracle::auc_pairs(s, y)) << "trial " << trial;
  }
}

TEST(Metrics, AucInvariances) {
  Rng rng(22);
  std::vector<double> s(200);
  std::vector<int> y(200);
  for (std::size_t i = 0; i < s.size(); ++i) {
    s[i] = uniform(rng, -3, 3);
    y[i] = static_cast<int>(i % 3 == 0);
  }
  const double base = auc_rank_sum(s, y);
  std::vector<double> mapped(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) mapped[i] = std::exp(2 * s[i]) + 7;
  EXPECT_DOUBLE_EQ(auc_rank_sum(mapped, y), base);

  std::vector<std::size_t> perm(s.size());
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  std::vector<double> ps;
  std::vector<int> py;
  for (auto i : perm) {
    ps.push_back(s[i]);
    py.push_back(y[i]);
  }
  EXPECT_DOUBLE_EQ(auc_rank_sum(ps, py), base);
}

TEST(Metrics, SingleClassIsUndefined) {
  const std::vector<double> s{0.1, 0.2};
  const std::vector<int> y{1, 1};
  EXPECT_THROW(auc_rank_sum(s, y), UndefinedMetricError);
}

TEST(Metrics, AccuracyAndRecall) {
  // sigmoid(0) = 0.5 counts as positive.
  const std::vector<double> s{2.0, 0.0, -1.0, -3.0, 1.0};
  const std::vector<int> y{1, 0, 1, 0, 0};
  const auto m = compute_metrics(s, y);
  EXPECT_EQ(m.tp, 1u);
  EXPECT_EQ(m.fp, 2u);
  EXPECT_EQ(m.fn, 1u);
  EXPECT_EQ(m.tn, 1u);
  EXPECT_DOUBLE_EQ(m.accuracy, 2.0 / 5.0);
  EXPECT_DOUBLE_EQ(m.recall, 0.5);

  const std::vector<MetricSet> sets{m, compute_metrics(std::vector<double>{5, -5}, std::vector<int>{1, 0})};
  const auto mean = mean_metrics(sets);
  EXPECT_DOUBLE_EQ(mean.accuracy, 0.7);
  EXPECT_DOUBLE_EQ(mean.recall, 0.75);
}

TEST(Config, JsonRoundTrip) {
  auto cfg = ExperimentConfig::from_json(smoke_json());
  cfg.attack.poison.kind = threat::PoisonKind::LabelFlip;
  cfg.attack.poison.malicious_nodes = {1};
  cfg.sweep = SweepSpec{"depth", {1, 2}};
  const auto j = cfg.to_json();
  EXPECT_EQ(ExperimentConfig::from_json(j).to_json().dump(), j.dump());
}

TEST(Config, RejectsUnknownAndInvalid) {
  auto j = smoke_json();
  j["federation"]["t_locl"] = 0.5;
  EXPECT_THROW(ExperimentConfig::from_json(j), ConfigError);
  j = smoke_json();
  j["extra"] = 1;
  EXPECT_THROW(ExperimentConfig::from_json(j), ConfigError);
  j = smoke_json();
  j["federation"]["t_local"] = 1.5;
  EXPECT_THROW(ExperimentConfig::from_json(j), ConfigError);
  j = smoke_json();
  j["sweep"] = {{"param", "lr"}, {"values", {1}}};
  EXPECT_THROW(ExperimentConfig::from_json(j), ConfigError);
}

TEST(Config, DefaultAdversary) {
  auto j = smoke_json();
  j["federation"]["n_nodes"] = 5;
  j["attack"] = {{"kind", "label_flip"}};
  EXPECT_EQ(ExperimentConfig::from_json(j).attack.poison.malicious_nodes, (std::set<int>{0, 1}));
  j["federation"]["n_nodes"] = 2;
  EXPECT_EQ(ExperimentConfig::from_json(j).attack.poison.malicious_nodes, (std::set<int>{0}));
}

TEST(Config, SweepValueAndMatchedLstm) {
  const auto cfg = ExperimentConfig::from_json(smoke_json());
  EXPECT_EQ(with_sweep_value(cfg, "n_qubits", 3).model.n_qubits, 3);
  EXPECT_EQ(with_sweep_value(cfg, "n_nodes", 4).federation.n_nodes, 4);
  auto lstm_cfg = cfg;
  lstm_cfg.model.kind = lstm::ModelKind::Lstm;
  lstm_cfg.match_qlstm_params = true;
  const auto q = lstm::make_model(cfg.resolved_model(4), 0);
  const auto l = lstm::make_model(lstm_cfg.resolved_model(4), 0);
  const double pq = static_cast<double>(q->param_count());
  EXPECT_LE(std::abs(static_cast<double>(l->param_count()) - pq), 0.15 * pq);
}

TEST(Experiment, SmokeRunIsFastAndReproducible) {
  const auto cfg = ExperimentConfig::from_json(smoke_json());
  const auto a = scratch("smoke_a"), b = scratch("smoke_b");
  const auto t0 = std::chrono::steady_clock::now();
  const auto res = run_experiment(cfg, a);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  EXPECT_LT(secs, 60.0);
  ASSERT_EQ(res.runs.size(), 1u);
  ASSERT_TRUE(res.runs[0].ok) << res.runs[0].error;
  EXPECT_EQ(res.runs[0].rounds.size(), 2u);
  EXPECT_GE(res.runs[0].mean.auc, 0.0);
  EXPECT_LE(res.runs[0].mean.auc, 1.0);

  run_experiment(cfg, b);
  for (const char* f : {"results.json", "round_log.jsonl"}) {
    const auto x = slurp(a / f);
    EXPECT_FALSE(x.empty()) << f;
    EXPECT_EQ(x, slurp(b / f)) << f;
  }
  const auto j = nlohmann::json::parse(slurp(a / "results.json"));
  EXPECT_EQ(j["format"], "qfl-results/1");
  EXPECT_FALSE(j["config"].contains("output_dir"));
  std::istringstream log(slurp(a / "round_log.jsonl"));
  std::string line;
  int lines = 0;
  while (std::getline(log, line)) {
    const auto r = nlohmann::json::parse(line);
    EXPECT_EQ(r["seed"], 3);
    ++lines;
  }
  EXPECT_EQ(lines, 2);
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST(Experiment, LabelFlipChangesOutcome) {
  auto cfg = ExperimentConfig::from_json(smoke_json());
  const auto clean = run_single(cfg, 3);
  cfg.attack.poison.kind = threat::PoisonKind::LabelFlip;
  cfg.attack.poison.flip_prob = 1.0;
  cfg.attack.poison.malicious_nodes = {0};
  const auto attacked = run_single(cfg, 3);
  ASSERT_TRUE(clean.ok && attacked.ok);
  EXPECT_NE(run_result_to_json(clean).dump(), run_result_to_json(attacked).dump());
}

TEST(Experiment, FailuresAreCaptured) {
  auto j = smoke_json();
  j["data"]["n_samples"] = 3;
  const auto cfg = ExperimentConfig::from_json(j);
  const auto r = run_single(cfg, 0);
  EXPECT_FALSE(r.ok);
  EXPECT_FALSE(r.error.empty());
}

TEST(Experiment, SummaryUsesSampleStd) {
  std::vector<RunResult> runs(3);
  const double acc[] = {0.6, 0.7, 0.8};
  for (int i = 0; i < 3; ++i) {
    runs[i].ok = true;
    runs[i].mean.accuracy = acc[i];
  }
  runs.push_back(RunResult{});
  const auto s = summarize_runs(runs);
  EXPECT_EQ(s.runs, 4u);
  EXPECT_EQ(s.failures, 1u);
  EXPECT_NEAR(s.accuracy_mean, 0.7, 1e-12);
  EXPECT_NEAR(s.accuracy_std, 0.1, 1e-12);
}

TEST(Sweep, CsvRowsAndSingleValueAgreement) {
  auto cfg = ExperimentConfig::from_json(smoke_json());
  cfg.federation.rounds = 1;
  const SweepSpec spec{"depth", {1, 2}};
  const auto points = run_sweep(cfg, spec);
  ASSERT_EQ(points.size(), 2u);
  const auto csv = sweep_csv("depth", points);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 3);
  EXPECT_EQ(csv.substr(0, csv.find('\n')),
            "param,value,runs,failures,accuracy_mean,accuracy_std,recall_mean,recall_std,auc_mean,auc_std");
  const auto direct = run_single(with_sweep_value(cfg, "depth", 1), 3);
  EXPECT_EQ(run_result_to_json(points[0].runs[0]).dump(), run_result_to_json(direct).dump());

  auto parallel = cfg;
  parallel.workers = 2;
  const auto again = run_sweep(parallel, spec);
  EXPECT_EQ(sweep_csv("depth", again), csv);
}

TEST(CircuitEval, GateListMatchesClosedForm) {
  const auto r = circuit_eval(nlohmann::json::parse(R"({
    "n_qubits": 2,
    "gates": [{"kind": "RX", "wires": [0], "angles": [0.7]}, {"kind": "CNOT", "wires": [0, 1]}]
  })"));
  ASSERT_EQ(r["expvals"].size(), 2u);
  EXPECT_NEAR(r["expvals"][0].get<double>(), std::cos(0.7), 1e-12);
  EXPECT_NEAR(r["expvals"][1].get<double>(), std::cos(0.7), 1e-12);
}

TEST(CircuitEval, VqcFormWithGradients) {
  const std::vector<double> x{0.1, -0.4, 0.9};
  std::vector<double> w(2 * 3 * 3);
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = 0.1 * static_cast<double>(i) - 0.7;
  const nlohmann::json req{{"n_qubits", 3}, {"depth", 2}, {"entangler", "ring"},
                           {"inputs", x}, {"weights", w}, {"upstream", {1.0, -0.5, 0.25}}};
  const auto r = circuit_eval(req);
  const auto expect = oracle::naive_expvals(oracle::naive_vqc_ops(x, w, 3, 2, true), 3);
  for (int q = 0; q < 3; ++q) EXPECT_NEAR(r["expvals"][q].get<double>(), expect[q], 1e-12);
  ASSERT_EQ(r["grad_inputs"].size(), 3u);
  ASSERT_EQ(r["grad_weights"].size(), w.size());
  auto f = [&](std::span<const double> xi) {
    const auto e = oracle::naive_expvals(oracle::naive_vqc_ops(xi, w, 3, 2, true), 3);
    return e[0] - 0.5 * e[1] + 0.25 * e[2];
  };
  const auto fd = oracle::central_diff(f, x, 1e-6);
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(r["grad_inputs"][i].get<double>(), fd[i], 1e-8);
  EXPECT_THROW(circuit_eval(nlohmann::json{{"n_qubits", 2}}), ConfigError);
}

TEST(Compare, RestrictToNodesAveragesTheRest) {
  RunResult r;
  r.ok = true;
  r.node_metrics.resize(3);
  r.node_metrics[0].accuracy = 0.1;
  r.node_metrics[1].accuracy = 0.6;
  r.node_metrics[2].accuracy = 0.8;
  r.mean = mean_metrics(r.node_metrics);
  const auto out = restrict_to_nodes({r}, {0});
  EXPECT_DOUBLE_EQ(out[0].mean.accuracy, 0.7);
  EXPECT_DOUBLE_EQ(restrict_to_nodes({r}, {})[0].mean.accuracy, r.mean.accuracy);
}

TEST(Compare, AttackEvalReportsHonestNodes) {
  auto cfg = ExperimentConfig::from_json(smoke_json());
  cfg.attack.poison.kind = threat::PoisonKind::LabelFlip;
  cfg.attack.poison.malicious_nodes = {0};
  const auto o = evaluate_attack(cfg);
  ASSERT_EQ(o.clean.size(), 1u);
  EXPECT_DOUBLE_EQ(o.clean_honest_summary.accuracy_mean, o.clean[0].node_metrics[1].accuracy);
  EXPECT_DOUBLE_EQ(o.attacked_honest_summary.accuracy_mean, o.attacked[0].node_metrics[1].accuracy);
  EXPECT_EQ(o.honest_degradation.size(), 3u);
}
