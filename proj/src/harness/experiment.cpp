// SPDX-License-Identifier: Apache-2.0
#include "qfl/harness/experiment.hpp"

#include <cmath>
#include <fstream>

#include "qfl/common/error.hpp"
#include "qfl/data/pipeline.hpp"
#include "qfl/fed/wire.hpp"
#include "qfl/threat/dp.hpp"
#include "qfl/threat/poison.hpp"

namespace qfl::harness {

using nlohmann::json;

namespace {

MetricSet evaluate_model(const lstm::SequenceModel& model, const lstm::SequenceSet& test) {
  const auto logits = lstm::predict_logits(model, test);
  return compute_metrics(logits, test.labels());
}

int first_honest(const threat::PoisonConfig& p, int n) {
  for (int i = 0; i < n; ++i) {
    if (p.kind == threat::PoisonKind::None || !p.malicious_nodes.count(i)) return i;
  }
  return 0;
}

std::unique_ptr<lstm::SequenceModel> reconstruct(const lstm::SequenceModel& victim,
                                                 const std::vector<fed::SharedSubset>& observed, int victim_id) {
  auto model = victim.clone();
  auto& store = model->params();
  const fed::SharedSubset* own = nullptr;
  for (const auto& s : observed) {
    if (s.node_id == victim_id) own = &s;
  }
  fed::ParamMap values;
  for (std::size_t i = 0; i < store.size(); ++i) {
    const std::string& id = store.id(i);
    if (own) {
      if (auto it = own->entries.find(id); it != own->entries.end()) {
        values.emplace(id, it->second);
        continue;
      }
    }
    double sum = 0.0;
    int count = 0;
    for (const auto& s : observed) {
      if (s.node_id == victim_id) continue;
      if (auto it = s.entries.find(id); it != s.entries.end()) {
        sum += it->second;
        ++count;
      }
    }
    values.emplace(id, count ? sum / count : 0.0);
  }
  fed::apply_update(store, values);
  return model;
}

json inference_report_json(const threat::InferenceReport& r) {
  return {{"attack_accuracy", r.attack_accuracy},
          {"threshold", r.threshold},
          {"eval_count", r.eval_count},
          {"member_loss_mean", r.members.mean},
          {"member_loss_median", r.members.median},
          {"nonmember_loss_mean", r.nonmembers.mean},
          {"nonmember_loss_median", r.nonmembers.median},
          {"samples_per_set", r.members.count}};
}

void mean_std(const std::vector<double>& xs, double& mean, double& sd) {
  mean = sd = 0.0;
  if (xs.empty()) return;
  for (double x : xs) mean += x;
  mean /= static_cast<double>(xs.size());
  if (xs.size() < 2) return;
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  sd = std::sqrt(ss / static_cast<double>(xs.size() - 1));
}

}  // namespace

json result_config_json(const ExperimentConfig& cfg) {
  json j = cfg.to_json();
  j.erase("output_dir");
  j.erase("workers");
  return j;
}

RunResult run_single(const ExperimentConfig& cfg, std::uint64_t seed, const RoundSink& sink) {
  RunResult r;
  r.seed = seed;
  r.aggregation = cfg.effective_aggregation();
  try {
    cfg.validate();
    const int n = cfg.federation.n_nodes;
    const data::PreparedData prepared = data::prepare_or_load(cfg.data, cfg.model.seq_len, n, seed);
    const lstm::SequenceSet test = prepared.test_set();
    const lstm::ModelConfig mcfg = cfg.resolved_model(prepared.input_dim());
    r.input_dim = mcfg.input_dim;
    r.hidden_dim = mcfg.hidden_dim;
    r.n_test = test.size();

    const auto& poison = cfg.attack.poison;
    std::vector<fed::FederationNode> nodes;
    std::vector<lstm::SequenceSet> clean_shards;
    for (int i = 0; i < n; ++i) {
      fed::FederationNode node;
      node.model = lstm::make_model(
          mcfg, derive_seed(seed, "model-init", cfg.shared_init ? 0 : static_cast<std::uint64_t>(i)));
      node.train = prepared.shard(i);
      clean_shards.push_back(node.train);
      if (poison.kind == threat::PoisonKind::LabelFlip && poison.malicious_nodes.count(i)) {
        Rng rng = derive_rng(seed, "label-flip", static_cast<std::uint64_t>(i));
        node.train.mutable_labels() = threat::flip_labels(node.train.labels(), poison.flip_prob, rng);
      }
      r.shard_sizes.push_back(node.train.size());
      nodes.push_back(std::move(node));
    }
    r.param_count = nodes.front().model->param_count();

    fed::FederationConfig fcfg = cfg.federation;
    fcfg.seed = seed;
    fcfg.aggregation = r.aggregation;

    fed::FederationHooks hooks;
    hooks.evaluate = [&test](int, const lstm::SequenceModel& m) { return evaluate_model(m, test); };
    hooks.on_round = [&](const fed::RoundRecord& rec) {
      r.rounds.push_back(rec);
      if (sink) sink(seed, rec);
    };
    if (poison.kind == threat::PoisonKind::ModelNoise) {
      hooks.before_share = [&poison](int node, fed::ParamMap& shared, Rng& rng) {
        if (poison.malicious_nodes.count(node)) threat::poison_shared(shared, poison.lambda, poison.centered, rng);
      };
    }
    if (cfg.attack.defense == Defense::Dp) {
      hooks.server_defense = [&cfg](fed::ParamMap& delta, Rng& rng) {
        delta = threat::dp_defend(std::move(delta), cfg.attack.dp, rng);
      };
    }

    const fed::FederationResult fres = fed::run_federation(fcfg, cfg.training, nodes, hooks, cfg.workers);
    r.node_metrics = fres.rounds.back().node_metrics;
    r.mean = mean_metrics(r.node_metrics);

    if (cfg.attack.membership_inference) {
      InferenceOutcome inf;
      inf.victim = first_honest(poison, n);
      const auto& members_all = clean_shards[static_cast<std::size_t>(inf.victim)];
      const std::size_t m = std::min(members_all.size(), test.size());
      std::vector<std::size_t> idx(m);
      for (std::size_t k = 0; k < m; ++k) idx[k] = k;
      const auto members = members_all.subset(idx);
      const auto nonmembers = test.subset(idx);
      const auto& victim = *nodes[static_cast<std::size_t>(inf.victim)].model;
      const auto rebuilt = reconstruct(victim, fres.last_shared, inf.victim);
      inf.observed = threat::membership_inference(*rebuilt, members, nonmembers);
      inf.local = threat::membership_inference(victim, members, nonmembers);
      r.inference = inf;
    }
    r.ok = true;
  } catch (const Error& e) {
    r.ok = false;
    r.error = e.what();
  }
  return r;
}

json run_result_to_json(const RunResult& r) {
  json j{{"seed", r.seed}, {"status", r.ok ? "ok" : "failed"}};
  if (!r.ok) j["error"] = r.error;
  j["aggregation"] = fed::aggregation_name(r.aggregation);
  j["data"] = {{"input_dim", r.input_dim}, {"n_test", r.n_test}, {"shard_sizes", r.shard_sizes}};
  j["model"] = {{"hidden_dim", r.hidden_dim}, {"param_count", r.param_count}};
  j["rounds_completed"] = r.rounds.size();
  json nodes = json::array();
  for (const auto& m : r.node_metrics) nodes.push_back(metrics_to_json(m));
  j["node_metrics"] = std::move(nodes);
  j["mean_metrics"] = r.ok ? metrics_to_json(r.mean) : json(nullptr);
  if (r.inference) {
    j["inference"] = {{"victim", r.inference->victim},
                      {"observed", inference_report_json(r.inference->observed)},
                      {"local", inference_report_json(r.inference->local)}};
  }
  return j;
}

Summary summarize_runs(const std::vector<RunResult>& runs) {
  Summary s;
  s.runs = runs.size();
  std::vector<double> acc, rec, auc;
  for (const auto& r : runs) {
    if (!r.ok) {
      ++s.failures;
      continue;
    }
    acc.push_back(r.mean.accuracy);
    rec.push_back(r.mean.recall);
    auc.push_back(r.mean.auc);
  }
  mean_std(acc, s.accuracy_mean, s.accuracy_std);
  mean_std(rec, s.recall_mean, s.recall_std);
  mean_std(auc, s.auc_mean, s.auc_std);
  return s;
}

json summary_to_json(const Summary& s) {
  return {{"runs", s.runs},
          {"failures", s.failures},
          {"accuracy_mean", s.accuracy_mean},
          {"accuracy_std", s.accuracy_std},
          {"recall_mean", s.recall_mean},
          {"recall_std", s.recall_std},
          {"auc_mean", s.auc_mean},
          {"auc_std", s.auc_std}};
}

void write_json(const std::filesystem::path& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
  if (!out) throw Error("write failed for " + path.string());
}

ExperimentResult run_experiment(const ExperimentConfig& cfg, const std::filesystem::path& out_dir,
                                const std::string& command) {
  cfg.validate();
  std::filesystem::create_directories(out_dir);
  std::ofstream log(out_dir / "round_log.jsonl", std::ios::binary | std::ios::trunc);
  if (!log) throw Error("cannot write " + (out_dir / "round_log.jsonl").string());
  const RoundSink sink = [&log](std::uint64_t seed, const fed::RoundRecord& rec) {
    json line = fed::round_record_to_json(rec);
    line["seed"] = seed;
    log << line.dump() << '\n';
    log.flush();
  };

  ExperimentResult res;
  for (std::uint64_t seed : cfg.seeds) res.runs.push_back(run_single(cfg, seed, sink));
  res.summary = summarize_runs(res.runs);

  json runs = json::array();
  for (const auto& r : res.runs) runs.push_back(run_result_to_json(r));
  write_json(out_dir / "results.json", {{"format", "qfl-results/1"},
                                        {"command", command},
                                        {"config", result_config_json(cfg)},
                                        {"runs", std::move(runs)},
                                        {"summary", summary_to_json(res.summary)}});
  for (const auto& r : res.runs) {
    if (!r.ok) throw Error("run with seed " + std::to_string(r.seed) + " failed: " + r.error);
  }
  return res;
}

}  // namespace qfl::harness
