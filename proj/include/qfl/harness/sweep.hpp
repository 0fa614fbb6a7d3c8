// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "qfl/harness/config.hpp"
#include "qfl/harness/experiment.hpp"

namespace qfl::harness {

struct SweepPoint {
  int value = 0;
  std::vector<RunResult> runs;  // one per seed, in seed order
  Summary summary;
};

/// One run per (value, seed). Points execute on up to cfg.workers threads; a
/// failed run is recorded and the sweep continues.
std::vector<SweepPoint> run_sweep(const ExperimentConfig& cfg, const SweepSpec& spec);

/// Header: param,value,runs,failures,accuracy_mean,accuracy_std,recall_mean,recall_std,auc_mean,auc_std
std::string sweep_csv(const std::string& param, const std::vector<SweepPoint>& points);

/// Writes sweep.csv and results.json under `out_dir`.
std::vector<SweepPoint> run_sweep_to(const ExperimentConfig& cfg, const SweepSpec& spec,
                                     const std::filesystem::path& out_dir);

}  // namespace qfl::harness
