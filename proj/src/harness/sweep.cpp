// SPDX-License-Identifier: Apache-2.0
#include "qfl/harness/sweep.hpp"

#include <algorithm>
#include <future>
#include <sstream>

#include "qfl/common/format.hpp"

namespace qfl::harness {

using nlohmann::json;

std::vector<SweepPoint> run_sweep(const ExperimentConfig& cfg, const SweepSpec& spec) {
  spec.validate();
  struct Job {
    std::size_t point;
    std::uint64_t seed;
  };
  std::vector<SweepPoint> points;
  std::vector<ExperimentConfig> configs;
  std::vector<Job> jobs;
  for (std::size_t p = 0; p < spec.values.size(); ++p) {
    points.push_back({spec.values[p], {}, {}});
    ExperimentConfig c = with_sweep_value(cfg, spec.param, spec.values[p]);
    c.workers = 1;
    configs.push_back(std::move(c));
    for (std::uint64_t seed : cfg.seeds) jobs.push_back({p, seed});
  }

  std::vector<RunResult> results(jobs.size());
  const std::size_t width = static_cast<std::size_t>(std::max(1, cfg.workers));
  for (std::size_t base = 0; base < jobs.size(); base += width) {
    std::vector<std::future<void>> running;
    for (std::size_t k = base; k < std::min(jobs.size(), base + width); ++k) {
      running.push_back(std::async(width > 1 ? std::launch::async : std::launch::deferred, [&, k] {
        results[k] = run_single(configs[jobs[k].point], jobs[k].seed);
      }));
    }
    for (auto& f : running) f.get();
  }
  for (std::size_t k = 0; k < jobs.size(); ++k) points[jobs[k].point].runs.push_back(std::move(results[k]));
  for (auto& p : points) p.summary = summarize_runs(p.runs);
  return points;
}

std::string sweep_csv(const std::string& param, const std::vector<SweepPoint>& points) {
  std::ostringstream out;
  out << "param,value,runs,failures,accuracy_mean,accuracy_std,recall_mean,recall_std,auc_mean,auc_std\n";
  for (const auto& p : points) {
    const auto& s = p.summary;
    out << param << ',' << p.value << ',' << s.runs << ',' << s.failures << ',' << format_double(s.accuracy_mean)
        << ',' << format_double(s.accuracy_std) << ',' << format_double(s.recall_mean) << ','
        << format_double(s.recall_std) << ',' << format_double(s.auc_mean) << ',' << format_double(s.auc_std)
        << '\n';
  }
  return out.str();
}

std::vector<SweepPoint> run_sweep_to(const ExperimentConfig& cfg, const SweepSpec& spec,
                                     const std::filesystem::path& out_dir) {
  auto points = run_sweep(cfg, spec);
  write_text(out_dir / "sweep.csv", sweep_csv(spec.param, points));
  json jp = json::array();
  for (const auto& p : points) {
    json runs = json::array();
    for (const auto& r : p.runs) runs.push_back(run_result_to_json(r));
    jp.push_back({{"value", p.value}, {"runs", std::move(runs)}, {"summary", summary_to_json(p.summary)}});
  }
  write_json(out_dir / "results.json", {{"format", "qfl-results/1"},
                                        {"command", "sweep"},
                                        {"config", result_config_json(cfg)},
                                        {"sweep", {{"param", spec.param}, {"values", spec.values}}},
                                        {"points", std::move(jp)}});
  return points;
}

}  // namespace qfl::harness
