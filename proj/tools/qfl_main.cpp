// SPDX-License-Identifier: Apache-2.0
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "qfl/common/error.hpp"
#include "qfl/data/pipeline.hpp"
#include "qfl/harness/circuit_eval.hpp"
#include "qfl/harness/compare.hpp"
#include "qfl/harness/config.hpp"
#include "qfl/harness/experiment.hpp"
#include "qfl/harness/sweep.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using qfl::harness::ExperimentConfig;

namespace {

struct CommonArgs {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::optional<int> workers;
};

void add_common(CLI::App* cmd, CommonArgs& a, bool config_required = true) {
  auto* opt = cmd->add_option("--config", a.config, "Experiment config (JSON)")->check(CLI::ExistingFile);
  if (config_required) opt->required();
  cmd->add_option("--seed", a.seed, "Run a single seed instead of the configured list");
  cmd->add_option("--out", a.out, "Output directory (overrides output_dir)");
  cmd->add_option("--workers", a.workers, "Worker threads")->check(CLI::PositiveNumber);
}

ExperimentConfig load_config(const CommonArgs& a) {
  ExperimentConfig cfg = a.config.empty() ? ExperimentConfig{} : ExperimentConfig::load(a.config);
  if (a.seed) cfg.seeds = {*a.seed};
  if (!a.out.empty()) cfg.output_dir = a.out;
  if (a.workers) cfg.workers = *a.workers;
  cfg.validate();
  return cfg;
}

void print_summary(const qfl::harness::Summary& s) {
  std::cout << "runs=" << s.runs << " failures=" << s.failures << " accuracy=" << s.accuracy_mean
            << " recall=" << s.recall_mean << " auc=" << s.auc_mean << '\n';
}

int cmd_prepare(const CommonArgs& a) {
  const auto cfg = load_config(a);
  const fs::path out = cfg.output_dir;
  const auto seed = cfg.seeds.front();
  const auto p = qfl::data::prepare_data(cfg.data, cfg.model.seq_len, cfg.federation.n_nodes, seed);
  fs::create_directories(out);
  qfl::data::save_prepared(p, out / "dataset.json");
  std::size_t positives = 0;
  for (int y : p.row_labels) positives += static_cast<std::size_t>(y);
  json shards = json::array();
  for (const auto& s : p.split.clients) shards.push_back(s.size());
  json summary{{"seed", seed},
               {"rows", p.row_labels.size()},
               {"positive_rate", p.row_labels.empty() ? 0.0 : static_cast<double>(positives) / p.row_labels.size()},
               {"input_dim", p.input_dim()},
               {"windows", p.window_ends.size()},
               {"train_windows", p.split.train.size()},
               {"test_windows", p.split.test.size()},
               {"shard_sizes", shards}};
  if (p.pca) {
    const auto ratio = p.pca->explained_variance_ratio();
    summary["pca_explained_variance_ratio"] = std::vector<double>(ratio.data(), ratio.data() + ratio.size());
  }
  qfl::harness::write_json(out / "data_summary.json", summary);
  std::cout << "wrote " << (out / "dataset.json").string() << " (" << p.window_ends.size() << " windows, d="
            << p.input_dim() << ")\n";
  return 0;
}

int cmd_train(const CommonArgs& a) {
  const auto cfg = load_config(a);
  const auto res = qfl::harness::run_experiment(cfg, cfg.output_dir, "train");
  print_summary(res.summary);
  return 0;
}

int cmd_sweep(const CommonArgs& a, const std::string& param, const std::vector<int>& values) {
  auto cfg = load_config(a);
  qfl::harness::SweepSpec spec;
  if (!param.empty() || !values.empty()) {
    spec = {param, values};
  } else if (cfg.sweep) {
    spec = *cfg.sweep;
  } else {
    throw qfl::ConfigError("sweep needs a 'sweep' config section or --param/--values");
  }
  const auto points = qfl::harness::run_sweep_to(cfg, spec, cfg.output_dir);
  for (const auto& p : points) {
    std::cout << spec.param << '=' << p.value << ": ";
    print_summary(p.summary);
  }
  return 0;
}

int cmd_compare(const CommonArgs& a) {
  const auto cfg = load_config(a);
  const auto rows = qfl::harness::compare_to(cfg, cfg.output_dir);
  std::cout << qfl::harness::comparison_csv(rows);
  return 0;
}

int cmd_attack_eval(const CommonArgs& a) {
  const auto cfg = load_config(a);
  const auto o = qfl::harness::attack_eval_to(cfg, cfg.output_dir);
  std::cout << qfl::threat::degradation_csv(o.degradation);
  return 0;
}

int cmd_circuit_eval(const std::string& circuit, const std::string& out) {
  std::ifstream in(circuit);
  if (!in) throw qfl::ConfigError("cannot open " + circuit);
  json request;
  try {
    in >> request;
  } catch (const json::exception& e) {
    throw qfl::ConfigError(circuit + " is not valid JSON: " + e.what());
  }
  const json result = qfl::harness::circuit_eval(request);
  if (!out.empty()) qfl::harness::write_json(fs::path(out) / "circuit_eval.json", result);
  std::cout << result.dump() << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Federated QLSTM fraud-detection experiments"};
  app.require_subcommand(1);

  CommonArgs prep_args, train_args, sweep_args, compare_args, attack_args;
  add_common(app.add_subcommand("prepare-data", "Preprocess data and write a dataset cache"), prep_args);
  add_common(app.add_subcommand("train", "Run a federated experiment"), train_args);
  auto* sweep = app.add_subcommand("sweep", "Vary one hyperparameter");
  add_common(sweep, sweep_args);
  std::string sweep_param;
  std::vector<int> sweep_values;
  sweep->add_option("--param", sweep_param, "n_qubits, depth, seq_len or n_nodes");
  sweep->add_option("--values", sweep_values, "Values to try")->delimiter(',');
  add_common(app.add_subcommand("compare", "QLSTM vs LSTM under each defense"), compare_args);
  add_common(app.add_subcommand("attack-eval", "Clean vs attacked runs and degradation report"), attack_args);
  auto* circuit = app.add_subcommand("circuit-eval", "Evaluate a circuit description");
  std::string circuit_file, circuit_out;
  circuit->add_option("--circuit,--config", circuit_file, "Circuit JSON")->required()->check(CLI::ExistingFile);
  circuit->add_option("--out", circuit_out, "Also write circuit_eval.json here");

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand("prepare-data")) return cmd_prepare(prep_args);
    if (app.got_subcommand("train")) return cmd_train(train_args);
    if (app.got_subcommand("sweep")) return cmd_sweep(sweep_args, sweep_param, sweep_values);
    if (app.got_subcommand("compare")) return cmd_compare(compare_args);
    if (app.got_subcommand("attack-eval")) return cmd_attack_eval(attack_args);
    if (app.got_subcommand("circuit-eval")) return cmd_circuit_eval(circuit_file, circuit_out);
  } catch (const qfl::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const qfl::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
