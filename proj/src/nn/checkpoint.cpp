// SPDX-License-Identifier: Apache-2.0
#include "qfl/nn/checkpoint.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"
#include "qfl/common/error.hpp"

namespace qfl::nn {

using nlohmann::json;

std::string checkpoint_to_string(const ParamStore& store) {
  json params = json::array();
  const auto vals = store.values();
  for (std::size_t i = 0; i < store.size(); ++i) params.push_back(json::array({store.id(i), vals[i]}));
  json doc{{"format", "qfl-params/1"}, {"params", std::move(params)}};
  return doc.dump() + "\n";
}

void checkpoint_from_string(ParamStore& store, const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw DataError(std::string("malformed checkpoint: ") + e.what());
  }
  if (doc.value("format", "") != "qfl-params/1") throw DataError("unsupported checkpoint format");
  const auto& params = doc.at("params");
  if (params.size() != store.size()) throw ProtocolError("checkpoint parameter count mismatch");
  auto vals = store.values();
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (params[i].at(0).get<std::string>() != store.id(i)) {
      throw ProtocolError("checkpoint id mismatch at position " + std::to_string(i));
    }
    vals[i] = params[i].at(1).get<double>();
  }
}

void save_checkpoint(const ParamStore& store, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  out << checkpoint_to_string(store);
}

void load_checkpoint(ParamStore& store, const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  checkpoint_from_string(store, ss.str());
}

}  // namespace qfl::nn
