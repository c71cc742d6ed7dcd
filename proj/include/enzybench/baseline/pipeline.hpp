#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "enzybench/baseline/gbdt.hpp"
#include "enzybench/corpus/manifest.hpp"
#include "enzybench/eval/metrics.hpp"

namespace enzybench::baseline {

struct BaselineConfig {
  int reaction_bits = 1024;  // reaction difference fingerprint width
  int mol_bits = 256;        // per-molecule fingerprint width
  int radius = 2;
  double ec_scale = 1.0;   // 0 removes the EC signal (ablation)
  bool include_ec = true;  // false drops the 4 EC columns entirely
  GBDTConfig gbdt;
};

struct BaselineRun {
  eval::TaskBlock block;
  std::size_t n_train = 0;
  std::size_t n_test = 0;
  bool train_loss_non_increasing = true;  // checked on every ensemble
  int rounds_used_max = 0;
};

// Trains and evaluates the gradient-boosting baseline for one task on the
// manifest's split: EC prediction regresses the 4-digit encoding from the
// 1024-bit reaction fingerprint; FS/RS map molecule fingerprint + EC
// encoding to the counterpart's 256-bit fingerprint, scored by exact
// fingerprint equality.
BaselineRun run_baseline_task(const corpus::Manifest &manifest,
                              corpus::Task task, const BaselineConfig &config,
                              GBDTModel *keep_model = nullptr);

// Re-runs the pipeline at each EC scale factor; factor 1 is the reference
// configuration.
std::vector<std::pair<double, BaselineRun>> ec_scale_ablation(
    const corpus::Manifest &manifest, corpus::Task task,
    const std::vector<double> &factors, const BaselineConfig &config);

}  // namespace enzybench::baseline
