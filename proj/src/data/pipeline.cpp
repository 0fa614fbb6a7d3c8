// SPDX-License-Identifier: Apache-2.0
#include "qfl/data/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>

#include "qfl/common/error.hpp"
#include "qfl/data/csv.hpp"

namespace qfl::data {

using nlohmann::json;

namespace {

constexpr const char* kCacheFormat = "qfl-data/1";

json vec_to_json(const Eigen::VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

Eigen::VectorXd vec_from_json(const json& j) {
  const auto v = j.get<std::vector<double>>();
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

json mat_to_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    std::vector<double> row(static_cast<std::size_t>(m.cols()));
    for (Eigen::Index c = 0; c < m.cols(); ++c) row[static_cast<std::size_t>(c)] = m(r, c);
    rows.push_back(std::move(row));
  }
  return json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(rows)}};
}

Eigen::MatrixXd mat_from_json(const json& j) {
  const auto rows = j.at("rows").get<Eigen::Index>();
  const auto cols = j.at("cols").get<Eigen::Index>();
  Eigen::MatrixXd m(rows, cols);
  const auto& data = j.at("data");
  if (static_cast<Eigen::Index>(data.size()) != rows) throw DataError("cache matrix row count mismatch");
  for (Eigen::Index r = 0; r < rows; ++r) {
    const auto& row = data[static_cast<std::size_t>(r)];
    if (static_cast<Eigen::Index>(row.size()) != cols) throw DataError("cache matrix column count mismatch");
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = row[static_cast<std::size_t>(c)].get<double>();
  }
  return m;
}

std::string hex_key(std::uint64_t k) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(k));
  return buf;
}

const char* source_name(DataSource s) { return s == DataSource::Csv ? "csv" : "synthetic"; }

DataSource parse_source(const std::string& s) {
  if (s == "synthetic") return DataSource::Synthetic;
  if (s == "csv") return DataSource::Csv;
  throw ConfigError("unknown data source '" + s + "' (expected synthetic or csv)");
}

}  // namespace

void apply_preset(DataConfig& cfg, const std::string& preset) {
  if (preset == "synthetic") {
    cfg.undersample = false;
    cfg.shuffle_rows = false;
    cfg.pca_components = 0;
  } else if (preset == "dataset1") {
    cfg.undersample = false;
    cfg.shuffle_rows = true;
    cfg.pca_components = 28;
  } else if (preset == "dataset2") {
    cfg.undersample = true;
    cfg.shuffle_rows = false;
    cfg.pca_components = 0;
  } else {
    throw ConfigError("unknown data preset '" + preset + "' (expected synthetic, dataset1 or dataset2)");
  }
  cfg.one_hot = true;
  cfg.scale = true;
  cfg.preset = preset;
}

void DataConfig::validate() const {
  if (!(train_ratio > 0 && train_ratio < 1)) throw ConfigError("data.train_ratio must lie in (0, 1)");
  if (pca_components < 0) throw ConfigError("data.pca_components must be >= 0");
  if (source == DataSource::Csv) {
    if (csv_path.empty()) throw ConfigError("data.csv_path is required for csv source");
    if (schema_path.empty()) throw ConfigError("data.schema_path is required for csv source");
  } else {
    if (synth.n_features < 2) throw ConfigError("data.n_features must be >= 2");
    if (synth.window < 1) throw ConfigError("data.window must be >= 1");
    if (synth.n_samples == 0) throw ConfigError("data.n_samples must be positive");
    if (!(synth.signal >= 0)) throw ConfigError("data.signal must be >= 0");
    if (pca_components > synth.n_features) throw ConfigError("data.pca_components exceeds n_features");
  }
}

json DataConfig::to_json() const {
  json j{{"source", source_name(source)},
         {"preset", preset},
         {"train_ratio", train_ratio},
         {"undersample", undersample},
         {"shuffle_rows", shuffle_rows},
         {"one_hot", one_hot},
         {"pca_components", pca_components},
         {"scale", scale}};
  if (source == DataSource::Synthetic) {
    j["n_samples"] = synth.n_samples;
    j["n_features"] = synth.n_features;
    j["signal"] = synth.signal;
    j["window"] = synth.window;
  } else {
    j["csv_path"] = csv_path;
    j["schema_path"] = schema_path;
  }
  if (!cache_path.empty()) j["cache_path"] = cache_path;
  return j;
}

DataConfig DataConfig::from_json(const json& j) {
  static const char* known[] = {"source", "preset", "train_ratio", "undersample", "shuffle_rows", "one_hot",
                                "pca_components", "scale", "n_samples", "n_features", "signal", "window",
                                "csv_path", "schema_path", "cache_path"};
  for (const auto& [k, v] : j.items()) {
    if (std::find(std::begin(known), std::end(known), k) == std::end(known)) {
      throw ConfigError("unknown key data." + k);
    }
  }
  DataConfig c;
  c.source = parse_source(j.value("source", std::string("synthetic")));
  apply_preset(c, j.value("preset", std::string(c.source == DataSource::Csv ? "dataset1" : "synthetic")));
  c.train_ratio = j.value("train_ratio", c.train_ratio);
  c.undersample = j.value("undersample", c.undersample);
  c.shuffle_rows = j.value("shuffle_rows", c.shuffle_rows);
  c.one_hot = j.value("one_hot", c.one_hot);
  c.pca_components = j.value("pca_components", c.pca_components);
  c.scale = j.value("scale", c.scale);
  c.synth.n_samples = j.value("n_samples", c.synth.n_samples);
  c.synth.n_features = j.value("n_features", c.synth.n_features);
  c.synth.signal = j.value("signal", c.synth.signal);
  c.synth.window = j.value("window", c.synth.window);
  c.csv_path = j.value("csv_path", std::string());
  c.schema_path = j.value("schema_path", std::string());
  c.cache_path = j.value("cache_path", std::string());
  return c;
}

lstm::SequenceSet PreparedData::windows(const std::vector<std::size_t>& which) const {
  lstm::SequenceSet set(seq_len, input_dim());
  std::vector<double> buf(static_cast<std::size_t>(seq_len) * static_cast<std::size_t>(input_dim()));
  for (std::size_t w : which) {
    const std::size_t end = window_ends.at(w);
    const std::size_t start = end + 1 - static_cast<std::size_t>(seq_len);
    for (int t = 0; t < seq_len; ++t)
      for (int c = 0; c < input_dim(); ++c)
        buf[static_cast<std::size_t>(t * input_dim() + c)] = rows(static_cast<Eigen::Index>(start) + t, c);
    set.add(buf, row_labels[end]);
  }
  return set;
}

std::uint64_t prepared_key(const DataConfig& cfg, int seq_len, int n_clients, std::uint64_t seed) {
  json j = cfg.to_json();
  j.erase("cache_path");
  j["seq_len"] = seq_len;
  j["n_clients"] = n_clients;
  j["seed"] = seed;
  return stable_hash(j.dump());
}

PreparedData prepare_data(const DataConfig& cfg, int seq_len, int n_clients, std::uint64_t seed) {
  cfg.validate();
  if (seq_len < 1) throw ConfigError("sequence length must be positive");

  TabularDataset data;
  if (cfg.source == DataSource::Synthetic) {
    Rng rng = derive_rng(seed, "data-synth");
    data = synth_generate(cfg.synth, rng);
  } else {
    data = load_csv(cfg.csv_path, CsvSchema::from_file(cfg.schema_path));
  }
  data.validate();

  if (cfg.undersample) {
    Rng rng = derive_rng(seed, "data-undersample");
    data = undersample(data, rng);
  }
  if (cfg.shuffle_rows) {
    Rng rng = derive_rng(seed, "data-shuffle");
    std::vector<std::size_t> perm(data.size());
    std::iota(perm.begin(), perm.end(), 0);
    for (std::size_t i = perm.size(); i > 1; --i) std::swap(perm[i - 1], perm[uniform_index(rng, i)]);
    data = data.select_rows(perm);
  }
  if (data.size() < static_cast<std::size_t>(seq_len)) throw ConfigError("fewer rows than the sequence length");

  PreparedData p;
  p.key = prepared_key(cfg, seq_len, n_clients, seed);
  p.seq_len = seq_len;
  p.n_clients = n_clients;
  p.row_labels = data.labels;
  for (std::size_t t = static_cast<std::size_t>(seq_len) - 1; t < data.size(); ++t) p.window_ends.push_back(t);
  {
    Rng rng = derive_rng(seed, "data-split");
    p.split = make_split(p.window_ends.size(), cfg.train_ratio, n_clients, rng);
  }
  std::vector<std::size_t> fit_rows;
  fit_rows.reserve(p.split.train.size());
  for (std::size_t w : p.split.train) fit_rows.push_back(p.window_ends[w]);

  Eigen::MatrixXd x;
  bool any_categorical = false;
  for (const auto& c : data.columns) any_categorical |= c.categorical;
  if (cfg.one_hot && any_categorical) {
    p.encoder = OneHotEncoder::fit(data, fit_rows);
    x = p.encoder->transform(data);
    p.feature_names = p.encoder->output_names(data);
  } else {
    x = data.features;
    for (const auto& c : data.columns) p.feature_names.push_back(c.name);
  }
  if (cfg.pca_components > 0) {
    p.pca = fit_pca(select_rows(x, fit_rows), cfg.pca_components);
    x = p.pca->transform(x);
    p.feature_names.clear();
    for (int k = 0; k < cfg.pca_components; ++k) p.feature_names.push_back("pc" + std::to_string(k));
  }
  if (cfg.scale) {
    p.scaler = StandardScaler::fit(select_rows(x, fit_rows));
    x = p.scaler->transform(x);
  }
  if (!x.allFinite()) throw DataError("non-finite values after preprocessing");
  p.rows = std::move(x);
  return p;
}

json prepared_to_json(const PreparedData& p) {
  json j{{"format", kCacheFormat},
         {"key", hex_key(p.key)},
         {"seq_len", p.seq_len},
         {"n_clients", p.n_clients},
         {"feature_names", p.feature_names},
         {"rows", mat_to_json(p.rows)},
         {"row_labels", p.row_labels},
         {"window_ends", p.window_ends},
         {"split", {{"train", p.split.train}, {"test", p.split.test}, {"clients", p.split.clients}}}};
  json fitted = json::object();
  if (p.encoder) {
    json cols = json::array();
    for (const auto& c : p.encoder->columns) cols.push_back({{"source", c.source}, {"vocab", c.vocab}});
    fitted["one_hot"] = {{"input_width", p.encoder->input_width}, {"columns", cols}};
  }
  if (p.pca) {
    fitted["pca"] = {{"mean", vec_to_json(p.pca->mean)},
                     {"components", mat_to_json(p.pca->components)},
                     {"explained_variance", vec_to_json(p.pca->explained_variance)},
                     {"total_variance", p.pca->total_variance}};
  }
  if (p.scaler) fitted["scaler"] = {{"mean", vec_to_json(p.scaler->mean)}, {"std", vec_to_json(p.scaler->std)}};
  j["fitted"] = std::move(fitted);
  return j;
}

PreparedData prepared_from_json(const json& j) {
  if (j.value("format", std::string()) != kCacheFormat) throw DataError("not a prepared-data cache");
  PreparedData p;
  try {
    p.key = std::stoull(j.at("key").get<std::string>(), nullptr, 16);
    p.seq_len = j.at("seq_len").get<int>();
    p.n_clients = j.at("n_clients").get<int>();
    p.feature_names = j.at("feature_names").get<std::vector<std::string>>();
    p.rows = mat_from_json(j.at("rows"));
    p.row_labels = j.at("row_labels").get<std::vector<int>>();
    p.window_ends = j.at("window_ends").get<std::vector<std::size_t>>();
    const auto& s = j.at("split");
    p.split.train = s.at("train").get<std::vector<std::size_t>>();
    p.split.test = s.at("test").get<std::vector<std::size_t>>();
    p.split.clients = s.at("clients").get<std::vector<std::vector<std::size_t>>>();
    const auto& f = j.at("fitted");
    if (f.contains("one_hot")) {
      OneHotEncoder enc;
      enc.input_width = f["one_hot"].at("input_width").get<int>();
      for (const auto& c : f["one_hot"].at("columns")) {
        enc.columns.push_back({c.at("source").get<std::size_t>(), c.at("vocab").get<std::vector<std::string>>()});
      }
      p.encoder = std::move(enc);
    }
    if (f.contains("pca")) {
      PcaModel m;
      m.mean = vec_from_json(f["pca"].at("mean"));
      m.components = mat_from_json(f["pca"].at("components"));
      m.explained_variance = vec_from_json(f["pca"].at("explained_variance"));
      m.total_variance = f["pca"].at("total_variance").get<double>();
      p.pca = std::move(m);
    }
    if (f.contains("scaler")) {
      StandardScaler s2;
      s2.mean = vec_from_json(f["scaler"].at("mean"));
      s2.std = vec_from_json(f["scaler"].at("std"));
      p.scaler = std::move(s2);
    }
  } catch (const json::exception& e) {
    throw DataError(std::string("malformed prepared-data cache: ") + e.what());
  }
  if (p.row_labels.size() != static_cast<std::size_t>(p.rows.rows())) throw DataError("cache label count mismatch");
  for (std::size_t e : p.window_ends) {
    if (e >= p.row_labels.size() || e + 1 < static_cast<std::size_t>(p.seq_len)) {
      throw DataError("cache window out of range");
    }
  }
  check_split(p.split, p.window_ends.size());
  return p;
}

void save_prepared(const PreparedData& p, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  out << prepared_to_json(p).dump() << '\n';
}

PreparedData load_prepared(const std::filesystem::path& path, std::uint64_t expected_key) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw DataError("malformed cache " + path.string() + ": " + e.what());
  }
  PreparedData p = prepared_from_json(j);
  if (p.key != expected_key) {
    throw DataError("cache " + path.string() + " was built for a different config (key " + hex_key(p.key) +
                    ", expected " + hex_key(expected_key) + ")");
  }
  return p;
}

PreparedData prepare_or_load(const DataConfig& cfg, int seq_len, int n_clients, std::uint64_t seed) {
  if (!cfg.cache_path.empty() && std::filesystem::exists(cfg.cache_path)) {
    return load_prepared(cfg.cache_path, prepared_key(cfg, seq_len, n_clients, seed));
  }
  return prepare_data(cfg, seq_len, n_clients, seed);
}

}  // namespace qfl::data
