// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <istream>
#include <string>
#include <vector>

#include "qfl/data/dataset.hpp"

namespace qfl::data {

/// Schema file (JSON):
///   {"label": "isFraud", "categorical": ["type"], "ignore": ["nameOrig", "nameDest"]}
struct CsvSchema {
  std::string label_column;
  std::vector<std::string> categorical;
  std::vector<std::string> ignore;

  static CsvSchema from_file(const std::filesystem::path& path);
};

/// Header row required. Numeric cells must parse completely; categorical cells
/// become codes in order of first appearance. Errors name the offending line.
TabularDataset parse_csv(std::istream& in, const CsvSchema& schema, const std::string& source = "<stream>");
TabularDataset load_csv(const std::filesystem::path& path, const CsvSchema& schema);

}  // namespace qfl::data
