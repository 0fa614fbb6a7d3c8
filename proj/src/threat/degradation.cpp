// SPDX-License-Identifier: Apache-2.0
#include "qfl/threat/degradation.hpp"

#include <sstream>

#include "qfl/common/error.hpp"
#include "qfl/common/format.hpp"

namespace qfl::threat {

std::vector<DegradationRow> degradation_report(const std::map<std::string, double>& clean,
                                               const std::map<std::string, double>& attacked) {
  if (clean.size() != attacked.size()) throw ConfigError("metric sets differ");
  std::vector<DegradationRow> rows;
  for (const auto& [name, c] : clean) {
    auto it = attacked.find(name);
    if (it == attacked.end()) throw ConfigError("attacked metrics lack " + name);
    if (c == 0.0) throw UndefinedMetricError("clean " + name + " is zero; percentage change undefined");
    rows.push_back({name, c, it->second, 100.0 * (it->second - c) / c});
  }
  return rows;
}

std::string degradation_csv(const std::vector<DegradationRow>& rows) {
  std::ostringstream out;
  out << "metric,clean,attacked,pct_change\n";
  for (const auto& r : rows) {
    out << r.metric << ',' << format_double(r.clean) << ',' << format_double(r.attacked) << ','
        << format_double(r.pct_change) << '\n';
  }
  return out.str();
}

}  // namespace qfl::threat
