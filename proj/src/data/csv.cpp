// SPDX-License-Identifier: Apache-2.0
#include "qfl/data/csv.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <unordered_map>

#include "json.hpp"
#include "qfl/common/error.hpp"

namespace qfl::data {

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quoted) {
      if (ch == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur.push_back('"');
        ++i;
      } else if (ch == '"') {
        quoted = false;
      } else {
        cur.push_back(ch);
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      cells.push_back(std::move(cur));
      cur.clear();
    } else if (ch != '\r') {
      cur.push_back(ch);
    }
  }
  cells.push_back(std::move(cur));
  return cells;
}

bool parse_number(const std::string& s, double& out) {
  const char* b = s.data();
  const char* e = s.data() + s.size();
  while (b < e && *b == ' ') ++b;
  while (e > b && e[-1] == ' ') --e;
  if (b == e) return false;
  if (*b == '+') ++b;
  auto res = std::from_chars(b, e, out);
  return res.ec == std::errc() && res.ptr == e;
}

bool contains(const std::vector<std::string>& v, const std::string& s) {
  return std::find(v.begin(), v.end(), s) != v.end();
}

}  // namespace

CsvSchema CsvSchema::from_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open schema " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw DataError("malformed schema " + path.string() + ": " + e.what());
  }
  CsvSchema s;
  s.label_column = j.at("label").get<std::string>();
  s.categorical = j.value("categorical", std::vector<std::string>{});
  s.ignore = j.value("ignore", std::vector<std::string>{});
  return s;
}

TabularDataset parse_csv(std::istream& in, const CsvSchema& schema, const std::string& source) {
  std::string line;
  if (!std::getline(in, line)) throw DataError(source + ": empty file");
  const auto header = split_line(line);
  int label_col = -1;
  std::vector<int> feature_cols;
  TabularDataset ds;
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (header[c] == schema.label_column) {
      label_col = static_cast<int>(c);
    } else if (!contains(schema.ignore, header[c])) {
      feature_cols.push_back(static_cast<int>(c));
      ds.columns.push_back({header[c], contains(schema.categorical, header[c]), {}});
    }
  }
  if (label_col < 0) throw DataError(source + ": label column '" + schema.label_column + "' not found");
  for (const auto& name : schema.categorical) {
    if (!contains(header, name)) throw DataError(source + ": categorical column '" + name + "' not found");
  }

  std::vector<std::unordered_map<std::string, int>> codes(feature_cols.size());
  std::vector<double> flat;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto cells = split_line(line);
    if (cells.size() != header.size()) {
      throw DataError(source + " line " + std::to_string(line_no) + ": expected " +
                      std::to_string(header.size()) + " cells, found " + std::to_string(cells.size()));
    }
    double y;
    if (!parse_number(cells[static_cast<std::size_t>(label_col)], y) || (y != 0.0 && y != 1.0)) {
      throw DataError(source + " line " + std::to_string(line_no) + ": label '" +
                      cells[static_cast<std::size_t>(label_col)] + "' is not 0 or 1");
    }
    ds.labels.push_back(static_cast<int>(y));
    for (std::size_t k = 0; k < feature_cols.size(); ++k) {
      const std::string& cell = cells[static_cast<std::size_t>(feature_cols[k])];
      if (ds.columns[k].categorical) {
        auto [it, fresh] = codes[k].emplace(cell, static_cast<int>(ds.columns[k].categories.size()));
        if (fresh) ds.columns[k].categories.push_back(cell);
        flat.push_back(static_cast<double>(it->second));
      } else {
        double v;
        if (!parse_number(cell, v) || !std::isfinite(v)) {
          throw DataError(source + " line " + std::to_string(line_no) + ", column '" + ds.columns[k].name +
                          "': cannot parse '" + cell + "' as a number");
        }
        flat.push_back(v);
      }
    }
  }
  if (ds.labels.empty()) throw DataError(source + ": no data rows");

  const auto n = static_cast<Eigen::Index>(ds.labels.size());
  const auto d = static_cast<Eigen::Index>(feature_cols.size());
  ds.features = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
      flat.data(), n, d);
  return ds;
}

TabularDataset load_csv(const std::filesystem::path& path, const CsvSchema& schema) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  return parse_csv(in, schema, path.string());
}

}  // namespace qfl::data
