// SPDX-License-Identifier: Apache-2.0
#include "qfl/harness/compare.hpp"

#include <limits>
#include <sstream>

#include "qfl/common/error.hpp"
#include "qfl/common/format.hpp"

namespace qfl::harness {

using nlohmann::json;

namespace {

std::vector<RunResult> run_seeds(const ExperimentConfig& cfg) {
  std::vector<RunResult> runs;
  for (std::uint64_t seed : cfg.seeds) runs.push_back(run_single(cfg, seed));
  return runs;
}

json runs_json(const std::vector<RunResult>& runs) {
  json a = json::array();
  for (const auto& r : runs) a.push_back(run_result_to_json(r));
  return a;
}

json degradation_json(const std::vector<threat::DegradationRow>& rows) {
  json a = json::array();
  for (const auto& r : rows) {
    a.push_back({{"metric", r.metric}, {"clean", r.clean}, {"attacked", r.attacked}, {"pct_change", r.pct_change}});
  }
  return a;
}

json outcome_json(const AttackOutcome& o) {
  return {{"clean", {{"runs", runs_json(o.clean)}, {"summary", summary_to_json(o.clean_summary)}}},
          {"attacked", {{"runs", runs_json(o.attacked)}, {"summary", summary_to_json(o.attacked_summary)}}},
          {"degradation", degradation_json(o.degradation)},
          {"honest_nodes",
           {{"clean", summary_to_json(o.clean_honest_summary)},
            {"attacked", summary_to_json(o.attacked_honest_summary)},
            {"degradation", degradation_json(o.honest_degradation)}}}};
}

// Metrics whose clean value is zero get a NaN percentage instead of aborting the report.
std::vector<threat::DegradationRow> safe_degradation(const Summary& clean, const Summary& attacked) {
  std::vector<threat::DegradationRow> rows;
  const auto a = headline(attacked);
  for (const auto& [name, c] : headline(clean)) {
    try {
      const auto one = threat::degradation_report({{name, c}}, {{name, a.at(name)}});
      rows.push_back(one.front());
    } catch (const UndefinedMetricError&) {
      rows.push_back({name, c, a.at(name), std::numeric_limits<double>::quiet_NaN()});
    }
  }
  return rows;
}

}  // namespace

std::map<std::string, double> headline(const Summary& s) {
  return {{"accuracy", s.accuracy_mean}, {"auc", s.auc_mean}, {"recall", s.recall_mean}};
}

std::vector<RunResult> restrict_to_nodes(const std::vector<RunResult>& runs, const std::set<int>& exclude) {
  std::vector<RunResult> out = runs;
  for (auto& r : out) {
    if (!r.ok) continue;
    std::vector<MetricSet> kept;
    for (std::size_t i = 0; i < r.node_metrics.size(); ++i)
      if (!exclude.count(static_cast<int>(i))) kept.push_back(r.node_metrics[i]);
    r.mean = mean_metrics(kept);
  }
  return out;
}

AttackOutcome evaluate_attack(const ExperimentConfig& cfg) {
  cfg.validate();
  AttackOutcome o;
  ExperimentConfig clean = cfg;
  clean.attack.poison.kind = threat::PoisonKind::None;
  o.clean = run_seeds(clean);
  o.attacked = cfg.attack.poison.kind == threat::PoisonKind::None ? o.clean : run_seeds(cfg);
  o.clean_summary = summarize_runs(o.clean);
  o.attacked_summary = summarize_runs(o.attacked);
  if (o.clean_summary.failures == 0 && o.attacked_summary.failures == 0) {
    o.degradation = safe_degradation(o.clean_summary, o.attacked_summary);
  }
  const auto& bad = cfg.attack.poison.malicious_nodes;
  o.clean_honest_summary = summarize_runs(restrict_to_nodes(o.clean, bad));
  o.attacked_honest_summary = summarize_runs(restrict_to_nodes(o.attacked, bad));
  if (o.clean_honest_summary.failures == 0 && o.attacked_honest_summary.failures == 0) {
    o.honest_degradation = safe_degradation(o.clean_honest_summary, o.attacked_honest_summary);
  }
  return o;
}

AttackOutcome attack_eval_to(const ExperimentConfig& cfg, const std::filesystem::path& out_dir) {
  AttackOutcome o = evaluate_attack(cfg);
  write_text(out_dir / "degradation.csv", threat::degradation_csv(o.degradation));
  if (cfg.attack.membership_inference) {
    json per_seed = json::array();
    for (const auto& r : o.attacked) {
      if (!r.inference) continue;
      per_seed.push_back({{"seed", r.seed},
                          {"victim", r.inference->victim},
                          {"observed_attack_accuracy", r.inference->observed.attack_accuracy},
                          {"local_attack_accuracy", r.inference->local.attack_accuracy}});
    }
    write_json(out_dir / "inference.json",
               {{"aggregation", fed::aggregation_name(cfg.effective_aggregation())}, {"runs", std::move(per_seed)}});
  }
  write_json(out_dir / "results.json", {{"format", "qfl-results/1"},
                                        {"command", "attack-eval"},
                                        {"config", result_config_json(cfg)},
                                        {"outcome", outcome_json(o)}});
  return o;
}

std::vector<CompareRow> compare_models(const ExperimentConfig& cfg) {
  std::vector<CompareRow> rows;
  for (const auto kind : {lstm::ModelKind::Qlstm, lstm::ModelKind::Lstm}) {
    for (const auto defense : {Defense::None, Defense::FedRansel, Defense::Dp}) {
      ExperimentConfig c = cfg;
      c.model.kind = kind;
      c.match_qlstm_params = kind == lstm::ModelKind::Lstm;
      c.attack.defense = defense;
      if (defense != Defense::FedRansel) c.federation.aggregation = fed::Aggregation::FedAvg;
      rows.push_back({lstm::model_kind_name(kind), defense_name(defense), evaluate_attack(c)});
    }
  }
  return rows;
}

std::string comparison_csv(const std::vector<CompareRow>& rows) {
  std::ostringstream out;
  out << "model,defense,accuracy,recall,auc\n";
  for (const auto& r : rows) {
    const auto& s = r.outcome.clean_summary;
    out << r.model << ',' << r.defense << ',' << format_double(s.accuracy_mean) << ','
        << format_double(s.recall_mean) << ',' << format_double(s.auc_mean) << '\n';
  }
  return out.str();
}

std::string compare_degradation_csv(const std::vector<CompareRow>& rows) {
  std::ostringstream out;
  out << "model,defense,metric,clean,attacked,pct_change\n";
  for (const auto& r : rows) {
    for (const auto& d : r.outcome.degradation) {
      out << r.model << ',' << r.defense << ',' << d.metric << ',' << format_double(d.clean) << ','
          << format_double(d.attacked) << ',' << format_double(d.pct_change) << '\n';
    }
  }
  return out.str();
}

std::vector<CompareRow> compare_to(const ExperimentConfig& cfg, const std::filesystem::path& out_dir) {
  auto rows = compare_models(cfg);
  write_text(out_dir / "comparison.csv", comparison_csv(rows));
  write_text(out_dir / "degradation.csv", compare_degradation_csv(rows));
  json jr = json::array();
  for (const auto& r : rows) jr.push_back({{"model", r.model}, {"defense", r.defense}, {"outcome", outcome_json(r.outcome)}});
  write_json(out_dir / "results.json", {{"format", "qfl-results/1"},
                                        {"command", "compare"},
                                        {"config", result_config_json(cfg)},
                                        {"rows", std::move(jr)}});
  return rows;
}

}  // namespace qfl::harness
