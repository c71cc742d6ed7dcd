#include <algorithm>
#include <map>
#include <set>

#include "enzybench/eval/metrics.hpp"

namespace enzybench::eval {

using corpus::ECNumber;

double ec_accuracy(const std::vector<ECSample> &samples, int depth,
                   Averaging averaging) {
  if (samples.empty()) return 0.0;
  if (averaging == Averaging::Micro) {
    std::size_t correct = 0;
    for (const ECSample &s : samples) {
      if (s.prediction && score_ec(*s.prediction, s.truth) >= depth) {
        ++correct;
      }
    }
    return static_cast<double>(correct) / static_cast<double>(samples.size());
  }
  // macro: unweighted mean over truth (sub)classes present at this depth
  std::map<std::string, std::pair<std::size_t, std::size_t>> by_class;
  for (const ECSample &s : samples) {
    auto &[correct, total] = by_class[s.truth.truncated(depth)];
    ++total;
    if (s.prediction && score_ec(*s.prediction, s.truth) >= depth) ++correct;
  }
  double sum = 0.0;
  for (const auto &[label, counts] : by_class) {
    sum += static_cast<double>(counts.first) /
           static_cast<double>(counts.second);
  }
  return sum / static_cast<double>(by_class.size());
}

ConfusionMatrix ec_confusion(const std::vector<ECSample> &samples, int depth) {
  std::set<std::string> truth_set;
  std::set<std::string> pred_set;
  for (const ECSample &s : samples) {
    truth_set.insert(s.truth.truncated(depth));
    if (s.prediction) pred_set.insert(s.prediction->truncated(depth));
  }
  ConfusionMatrix cm;
  cm.truth_labels.assign(truth_set.begin(), truth_set.end());
  // predicted-but-absent classes keep their own columns
  std::set<std::string> all_preds = truth_set;
  all_preds.insert(pred_set.begin(), pred_set.end());
  cm.pred_labels.assign(all_preds.begin(), all_preds.end());
  cm.pred_labels.push_back("invalid");
  cm.counts.assign(cm.truth_labels.size(),
                   std::vector<double>(cm.pred_labels.size(), 0.0));
  auto row_of = [&](const std::string &label) {
    return std::lower_bound(cm.truth_labels.begin(), cm.truth_labels.end(),
                            label) -
           cm.truth_labels.begin();
  };
  auto col_of = [&](const std::string &label) {
    return std::find(cm.pred_labels.begin(), cm.pred_labels.end(), label) -
           cm.pred_labels.begin();
  };
  for (const ECSample &s : samples) {
    std::size_t row = row_of(s.truth.truncated(depth));
    std::size_t col = s.prediction
                          ? col_of(s.prediction->truncated(depth))
                          : cm.pred_labels.size() - 1;
    cm.counts[row][col] += 1.0;
  }
  return cm;
}

std::vector<ClassScores> ec_class_scores(
    const std::vector<ECSample> &samples) {
  std::set<std::string> labels;
  for (const ECSample &s : samples) labels.insert(s.truth.truncated(1));
  std::vector<ClassScores> out;
  for (const std::string &label : labels) {
    ClassScores scores;
    scores.label = label;
    std::size_t tp = 0, fp = 0, fn = 0;
    for (const ECSample &s : samples) {
      bool truth_is = s.truth.truncated(1) == label;
      bool pred_is = s.prediction && s.prediction->truncated(1) == label;
      if (truth_is && pred_is) ++tp;
      if (!truth_is && pred_is) ++fp;
      if (truth_is && !pred_is) ++fn;
      if (truth_is) ++scores.support;
    }
    scores.precision = tp + fp == 0
                           ? 0.0
                           : static_cast<double>(tp) / (tp + fp);
    scores.recall = tp + fn == 0 ? 0.0 : static_cast<double>(tp) / (tp + fn);
    scores.f1 = scores.precision + scores.recall == 0.0
                    ? 0.0
                    : 2.0 * scores.precision * scores.recall /
                          (scores.precision + scores.recall);
    out.push_back(std::move(scores));
  }
  return out;
}

TaskBlock evaluate_ec_task(const std::vector<ECSample> &samples) {
  TaskBlock block;
  block.scalars["n_records"] = static_cast<double>(samples.size());
  for (int depth = 1; depth <= 3; ++depth) {
    const std::string key = "ec" + std::to_string(depth);
    block.scalars[key + "_macro"] =
        100.0 * ec_accuracy(samples, depth, Averaging::Macro);
    block.scalars[key + "_micro"] =
        100.0 * ec_accuracy(samples, depth, Averaging::Micro);
  }
  std::size_t parseable = 0;
  for (const ECSample &s : samples) {
    if (s.prediction) ++parseable;
  }
  block.scalars["validity"] =
      samples.empty() ? 0.0
                      : 100.0 * static_cast<double>(parseable) /
                            static_cast<double>(samples.size());
  double p = 0.0, r = 0.0, f = 0.0;
  auto per_class = ec_class_scores(samples);
  for (const ClassScores &scores : per_class) {
    block.scalars["ec1_precision_c" + scores.label] = 100.0 * scores.precision;
    block.scalars["ec1_recall_c" + scores.label] = 100.0 * scores.recall;
    block.scalars["ec1_f1_c" + scores.label] = 100.0 * scores.f1;
    p += scores.precision;
    r += scores.recall;
    f += scores.f1;
  }
  if (!per_class.empty()) {
    block.scalars["ec1_precision_macro"] = 100.0 * p / per_class.size();
    block.scalars["ec1_recall_macro"] = 100.0 * r / per_class.size();
    block.scalars["ec1_f1_macro"] = 100.0 * f / per_class.size();
  }
  block.matrices["ec1"] = ec_confusion(samples, 1);
  block.matrices["ec2"] = ec_confusion(samples, 2);
  return block;
}

}  // namespace enzybench::eval
