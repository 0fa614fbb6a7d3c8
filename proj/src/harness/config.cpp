// SPDX-License-Identifier: Apache-2.0
#include "qfl/harness/config.hpp"

#include <algorithm>
#include <fstream>
#include <initializer_list>

#include "qfl/common/error.hpp"

namespace qfl::harness {

using nlohmann::json;

namespace {

void check_keys(const json& j, const std::string& section, std::initializer_list<const char*> known) {
  if (!j.is_object()) throw ConfigError(section + " must be an object");
  for (const auto& [k, v] : j.items()) {
    if (std::none_of(known.begin(), known.end(), [&](const char* s) { return k == s; })) {
      throw ConfigError("unknown key " + (section.empty() ? k : section + "." + k));
    }
  }
}

template <typename T>
T get_or(const json& j, const char* key, T fallback, const std::string& section) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError("bad value for " + section + "." + key);
  }
}

const char* kSweepParams[] = {"n_qubits", "depth", "seq_len", "n_nodes"};

}  // namespace

Defense parse_defense(const std::string& name) {
  if (name == "none") return Defense::None;
  if (name == "dp") return Defense::Dp;
  if (name == "fedransel") return Defense::FedRansel;
  throw ConfigError("unknown defense '" + name + "' (expected none, dp or fedransel)");
}

const char* defense_name(Defense d) {
  switch (d) {
    case Defense::None: return "none";
    case Defense::Dp: return "dp";
    case Defense::FedRansel: return "fedransel";
  }
  return "none";
}

void SweepSpec::validate() const {
  if (std::none_of(std::begin(kSweepParams), std::end(kSweepParams), [&](const char* s) { return param == s; })) {
    throw ConfigError("sweep.param must be one of n_qubits, depth, seq_len, n_nodes");
  }
  if (values.empty()) throw ConfigError("sweep.values must not be empty");
}

void ExperimentConfig::validate() const {
  if (seeds.empty()) throw ConfigError("seeds must not be empty");
  if (workers < 1) throw ConfigError("workers must be >= 1");
  if (training.batch_size < 1) throw ConfigError("training.batch_size must be >= 1");
  if (!(training.optimizer.lr > 0)) throw ConfigError("training.lr must be positive");
  if (match_qlstm_params && model.kind != lstm::ModelKind::Lstm) {
    throw ConfigError("model.match_qlstm_params only applies to lstm models");
  }
  lstm::ModelConfig probe = model;
  probe.input_dim = std::max(1, probe.input_dim);
  probe.validate();
  federation.validate();
  data.validate();
  attack.poison.validate(federation.n_nodes);
  attack.dp.validate();
  if (sweep) sweep->validate();
}

fed::Aggregation ExperimentConfig::effective_aggregation() const {
  return attack.defense == Defense::FedRansel ? fed::Aggregation::FedRansel : federation.aggregation;
}

lstm::ModelConfig ExperimentConfig::resolved_model(int input_dim) const {
  lstm::ModelConfig m = model;
  m.input_dim = input_dim;
  if (match_qlstm_params) {
    m.hidden_dim = lstm::matched_lstm_hidden(
        input_dim, lstm::qlstm_param_count(input_dim, model.hidden_dim, model.n_qubits, model.depth));
  }
  m.validate();
  return m;
}

json ExperimentConfig::to_json() const {
  json malicious = json::array();
  for (int n : attack.poison.malicious_nodes) malicious.push_back(n);
  json j{
      {"model",
       {{"kind", lstm::model_kind_name(model.kind)},
        {"n_qubits", model.n_qubits},
        {"depth", model.depth},
        {"seq_len", model.seq_len},
        {"hidden_dim", model.hidden_dim},
        {"entangler", qc::entangler_name(model.entangler)},
        {"match_qlstm_params", match_qlstm_params}}},
      {"training",
       {{"optimizer", nn::optimizer_name(training.optimizer.kind)},
        {"lr", training.optimizer.lr},
        {"batch_size", training.batch_size}}},
      {"federation",
       {{"n_nodes", federation.n_nodes},
        {"rounds", federation.rounds},
        {"local_epochs", federation.local_epochs},
        {"t_local", federation.t_local},
        {"t_global", federation.t_global},
        {"aggregation", fed::aggregation_name(federation.aggregation)},
        {"shared_init", shared_init}}},
      {"data", data.to_json()},
      {"attack",
       {{"kind", threat::poison_kind_name(attack.poison.kind)},
        {"flip_prob", attack.poison.flip_prob},
        {"lambda", attack.poison.lambda},
        {"centered", attack.poison.centered},
        {"malicious_nodes", malicious},
        {"defense", defense_name(attack.defense)},
        {"dp", {{"norm_bound", attack.dp.norm_bound}, {"noise_scale", attack.dp.noise_scale}}},
        {"membership_inference", attack.membership_inference}}},
      {"seeds", seeds},
      {"output_dir", output_dir},
      {"workers", workers}};
  if (sweep) j["sweep"] = {{"param", sweep->param}, {"values", sweep->values}};
  return j;
}

ExperimentConfig ExperimentConfig::from_json(const json& j) {
  check_keys(j, "", {"model", "training", "federation", "data", "attack", "sweep", "seeds", "output_dir", "workers"});
  ExperimentConfig c;
  try {
    if (j.contains("model")) {
      const auto& m = j["model"];
      check_keys(m, "model", {"kind", "n_qubits", "depth", "seq_len", "hidden_dim", "entangler", "match_qlstm_params"});
      c.model.kind = lstm::parse_model_kind(get_or<std::string>(m, "kind", "qlstm", "model"));
      c.model.n_qubits = get_or(m, "n_qubits", c.model.n_qubits, "model");
      c.model.depth = get_or(m, "depth", c.model.depth, "model");
      c.model.seq_len = get_or(m, "seq_len", c.model.seq_len, "model");
      c.model.hidden_dim = get_or(m, "hidden_dim", c.model.hidden_dim, "model");
      c.model.entangler = qc::parse_entangler(get_or<std::string>(m, "entangler", "ring", "model"));
      c.match_qlstm_params = get_or(m, "match_qlstm_params", false, "model");
    }
    if (j.contains("training")) {
      const auto& t = j["training"];
      check_keys(t, "training", {"optimizer", "lr", "batch_size"});
      c.training.optimizer.kind = nn::parse_optimizer(get_or<std::string>(t, "optimizer", "adam", "training"));
      c.training.optimizer.lr = get_or(t, "lr", c.training.optimizer.lr, "training");
      c.training.batch_size = get_or(t, "batch_size", c.training.batch_size, "training");
    }
    if (j.contains("federation")) {
      const auto& f = j["federation"];
      check_keys(f, "federation",
                 {"n_nodes", "rounds", "local_epochs", "t_local", "t_global", "aggregation", "shared_init"});
      c.federation.n_nodes = get_or(f, "n_nodes", c.federation.n_nodes, "federation");
      c.federation.rounds = get_or(f, "rounds", c.federation.rounds, "federation");
      c.federation.local_epochs = get_or(f, "local_epochs", c.federation.local_epochs, "federation");
      c.federation.t_local = get_or(f, "t_local", c.federation.t_local, "federation");
      c.federation.t_global = get_or(f, "t_global", c.federation.t_global, "federation");
      c.federation.aggregation =
          fed::parse_aggregation(get_or<std::string>(f, "aggregation", "fedransel", "federation"));
      c.shared_init = get_or(f, "shared_init", c.shared_init, "federation");
    }
    if (j.contains("data")) c.data = data::DataConfig::from_json(j["data"]);
    if (j.contains("attack")) {
      const auto& a = j["attack"];
      check_keys(a, "attack", {"kind", "flip_prob", "lambda", "centered", "malicious_nodes", "defense", "dp",
                               "membership_inference"});
      c.attack.poison.kind = threat::parse_poison_kind(get_or<std::string>(a, "kind", "none", "attack"));
      c.attack.poison.flip_prob = get_or(a, "flip_prob", c.attack.poison.flip_prob, "attack");
      c.attack.poison.lambda = get_or(a, "lambda", c.attack.poison.lambda, "attack");
      c.attack.poison.centered = get_or(a, "centered", c.attack.poison.centered, "attack");
      for (int n : get_or(a, "malicious_nodes", std::vector<int>{}, "attack")) c.attack.poison.malicious_nodes.insert(n);
      c.attack.defense = parse_defense(get_or<std::string>(a, "defense", "none", "attack"));
      if (a.contains("dp")) {
        const auto& d = a["dp"];
        check_keys(d, "attack.dp", {"norm_bound", "noise_scale"});
        c.attack.dp.norm_bound = get_or(d, "norm_bound", c.attack.dp.norm_bound, "attack.dp");
        c.attack.dp.noise_scale = get_or(d, "noise_scale", c.attack.dp.noise_scale, "attack.dp");
      }
      c.attack.membership_inference = get_or(a, "membership_inference", false, "attack");
      if (c.attack.poison.kind != threat::PoisonKind::None && !a.contains("malicious_nodes")) {
        // Default adversary: the first two nodes, always leaving one honest node.
        for (int i = 0; i < std::min(2, c.federation.n_nodes - 1); ++i) c.attack.poison.malicious_nodes.insert(i);
      }
    }
    if (j.contains("sweep")) {
      const auto& s = j["sweep"];
      check_keys(s, "sweep", {"param", "values"});
      c.sweep = SweepSpec{get_or<std::string>(s, "param", "", "sweep"), get_or(s, "values", std::vector<int>{}, "sweep")};
    }
    c.seeds = get_or(j, "seeds", c.seeds, "");
    c.output_dir = get_or(j, "output_dir", c.output_dir, "");
    c.workers = get_or(j, "workers", c.workers, "");
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  }
  c.validate();
  return c;
}

ExperimentConfig ExperimentConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  json j;
  try {
    j = json::parse(in, nullptr, true, true);
  } catch (const json::exception& e) {
    throw ConfigError("config " + path.string() + " is not valid JSON: " + e.what());
  }
  return from_json(j);
}

ExperimentConfig with_sweep_value(const ExperimentConfig& base, const std::string& param, int value) {
  ExperimentConfig c = base;
  if (param == "n_qubits") {
    c.model.n_qubits = value;
  } else if (param == "depth") {
    c.model.depth = value;
  } else if (param == "seq_len") {
    c.model.seq_len = value;
  } else if (param == "n_nodes") {
    c.federation.n_nodes = value;
  } else {
    throw ConfigError("cannot sweep '" + param + "'");
  }
  c.sweep.reset();
  return c;
}

}  // namespace qfl::harness
