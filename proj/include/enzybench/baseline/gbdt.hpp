#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "enzybench/baseline/features.hpp"

namespace enzybench::baseline {

enum class Loss { Squared, Logistic };

// Binary axis-aligned regression tree stored as a flat node array.
struct TreeNode {
  int feature = -1;  // -1: leaf
  float threshold = 0.0f;
  int left = -1;
  int right = -1;
  float value = 0.0f;
};

struct RegressionTree {
  std::vector<TreeNode> nodes;
  float predict(const float *row) const;
};

struct GBDTConfig {
  int rounds = 100;
  int max_depth = 6;
  double learning_rate = 0.3;
  double lambda = 1.0;  // L2 on leaf values
  int patience = 10;    // early stopping on validation loss
  double validation_fraction = 0.10;
  std::uint64_t seed = 0;
  int threads = 0;  // 0: hardware concurrency
};

// One boosted ensemble per output dimension.
struct EnsembleModel {
  float base_score = 0.0f;
  std::vector<RegressionTree> trees;
  int rounds_used = 0;
  std::optional<int> early_stop_round;
  std::vector<double> train_loss;  // per round, on the training slice

  double predict_raw(const float *row) const;
};

struct GBDTModel {
  Loss loss = Loss::Squared;
  GBDTConfig config;
  std::vector<EnsembleModel> outputs;

  // raw scores (squared) or probabilities (logistic)
  std::vector<double> predict(const float *row) const;
};

// Trains one ensemble per target column. A 10% validation slice (seeded)
// drives early stopping; constant target columns become constant
// predictors. Training loss on the training slice is non-increasing every
// round under squared loss.
GBDTModel train_gbdt(const FeatureMatrix &X, const TargetMatrix &Y, Loss loss,
                     const GBDTConfig &config);

// Documented JSON tree format for cross-language reproducibility.
std::string gbdt_to_json(const GBDTModel &model);
GBDTModel gbdt_from_json(const std::string &json_text);
void save_gbdt(const GBDTModel &model, const std::string &path);
GBDTModel load_gbdt(const std::string &path);

}  // namespace enzybench::baseline
