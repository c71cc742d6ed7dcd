#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "enzybench/client/client.hpp"
#include "enzybench/corpus/manifest.hpp"

namespace enzybench::eval {

// Exactly one of `ec`, `smiles`, `format_error` is set.
struct ParsedPrediction {
  corpus::Task task = corpus::Task::EC;
  std::optional<corpus::ECNumber> ec;
  std::optional<std::string> smiles;
  std::optional<std::string> format_error;
};

// Extracts the single well-formed <EC>..</EC> or <SMILES>..</SMILES> span;
// surrounding prose is ignored. Missing, duplicated or empty tags become
// format_error payloads, as does EC content that is not four integers.
ParsedPrediction parse_response(const std::string &raw, corpus::Task task);

// Longest matching digit-prefix length, 0..4.
int score_ec(const corpus::ECNumber &pred, const corpus::ECNumber &truth);

enum class OutcomeCategory { CM, NCM, CV, NCV, Invalid };

std::string to_string(OutcomeCategory category);

struct PredictionOutcome {
  OutcomeCategory category = OutcomeCategory::Invalid;
  std::optional<double> tanimoto;  // present iff CV or NCV
  std::string record_id;
};

// Five-way taxonomy against one or more acceptable ground truths (branching
// alternatives for the same {input, EC} key); every truth must be stored in
// its canonical form. Tanimoto over CV/NCV is the maximum across truths.
PredictionOutcome classify_smiles_prediction(
    const ParsedPrediction &prediction, const std::vector<std::string> &truths);

struct ECSample {
  std::optional<corpus::ECNumber> prediction;  // nullopt: format error
  corpus::ECNumber truth;
};

enum class Averaging { Macro, Micro };

// Accuracy at the given truncation depth. Macro averages over truth
// (sub)classes present in the sample; micro pools records.
double ec_accuracy(const std::vector<ECSample> &samples, int depth,
                   Averaging averaging);

struct ConfusionMatrix {
  std::vector<std::string> truth_labels;  // rows, truth classes present
  std::vector<std::string> pred_labels;   // columns; may exceed rows; the
                                          // last column is "invalid"
  std::vector<std::vector<double>> counts;
};

ConfusionMatrix ec_confusion(const std::vector<ECSample> &samples, int depth);

struct ClassScores {
  std::string label;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t support = 0;
};

// Per main class precision/recall/F1 at depth 1.
std::vector<ClassScores> ec_class_scores(const std::vector<ECSample> &samples);

struct TanimotoAnalysis {
  std::vector<double> histogram;  // 20 bins of width 0.05 over CV and NCV
  std::size_t n_valid_nonmatch = 0;
  std::size_t count_eq_1 = 0;
  std::size_t count_gt_095 = 0;
  std::size_t count_gt_085 = 0;
};

TanimotoAnalysis tanimoto_analysis(
    const std::vector<PredictionOutcome> &outcomes);

// One task's metric block; scalar keys are stable so runs can be averaged.
struct TaskBlock {
  std::map<std::string, double> scalars;
  std::map<std::string, double> scalar_stddev;  // filled by aggregate_runs
  std::map<std::string, ConfusionMatrix> matrices;
  std::vector<double> tanimoto_histogram;
};

struct MetricsReport {
  std::string config_hash;
  int run_index = 1;
  int n_runs = 1;
  std::map<std::string, TaskBlock> tasks;  // keyed "ec" | "fs" | "rs"
};

TaskBlock evaluate_ec_task(const std::vector<ECSample> &samples);
TaskBlock evaluate_smiles_task(const std::vector<PredictionOutcome> &outcomes);

// Full evaluation of one response set against the manifest's test split.
// Class-7 records are excluded from aggregation; records missing from the
// response set count as Invalid and are reported in `missing_ids`.
struct EvaluationInput {
  const corpus::Manifest *manifest = nullptr;
  const client::ResponseSet *responses = nullptr;
};

MetricsReport evaluate(const EvaluationInput &input,
                       std::vector<std::string> *missing_ids = nullptr);

// Sample mean and n-1 standard deviation per scalar; matrices and
// histograms are averaged element-wise. Throws ConfigMismatch when the
// reports' config hashes differ.
MetricsReport aggregate_runs(const std::vector<MetricsReport> &reports);

}  // namespace enzybench::eval
