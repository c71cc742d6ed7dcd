#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "enzybench/chem/canonical.hpp"
#include "enzybench/chem/fingerprint.hpp"
#include "enzybench/chem/smiles.hpp"
#include "enzybench/eval/metrics.hpp"

namespace enzybench::eval {

std::string to_string(OutcomeCategory category) {
  switch (category) {
    case OutcomeCategory::CM: return "cm";
    case OutcomeCategory::NCM: return "ncm";
    case OutcomeCategory::CV: return "cv";
    case OutcomeCategory::NCV: return "ncv";
    case OutcomeCategory::Invalid: return "invalid";
  }
  return "invalid";
}

PredictionOutcome classify_smiles_prediction(
    const ParsedPrediction &prediction,
    const std::vector<std::string> &truths) {
  PredictionOutcome outcome;
  if (prediction.format_error || !prediction.smiles) {
    outcome.category = OutcomeCategory::Invalid;
    return outcome;
  }
  const std::string &raw = *prediction.smiles;
  // CM is raw byte equality against the dataset's stored canonical string.
  if (std::find(truths.begin(), truths.end(), raw) != truths.end()) {
    outcome.category = OutcomeCategory::CM;
    return outcome;
  }
  chem::Molecule molecule;
  std::string canonical;
  try {
    molecule = chem::parse_smiles(raw);
    canonical = chem::canonical_smiles(molecule);
  } catch (const Error &) {
    outcome.category = OutcomeCategory::Invalid;
    return outcome;
  }
  if (std::find(truths.begin(), truths.end(), canonical) != truths.end()) {
    outcome.category = OutcomeCategory::NCM;
    return outcome;
  }
  outcome.category = raw == canonical ? OutcomeCategory::CV
                                      : OutcomeCategory::NCV;
  chem::BitFingerprint pred_fp = chem::path_fingerprint(molecule);
  double best = 0.0;
  for (const std::string &truth : truths) {
    chem::BitFingerprint truth_fp =
        chem::path_fingerprint(chem::parse_smiles(truth));
    best = std::max(best, chem::tanimoto(pred_fp, truth_fp));
  }
  outcome.tanimoto = best;
  return outcome;
}

TanimotoAnalysis tanimoto_analysis(
    const std::vector<PredictionOutcome> &outcomes) {
  TanimotoAnalysis analysis;
  analysis.histogram.assign(20, 0.0);
  for (const PredictionOutcome &outcome : outcomes) {
    if (!outcome.tanimoto) continue;
    double t = *outcome.tanimoto;
    ++analysis.n_valid_nonmatch;
    int bin = std::min(19, static_cast<int>(t / 0.05));
    analysis.histogram[bin] += 1.0;
    if (t == 1.0) ++analysis.count_eq_1;
    if (t > 0.95) ++analysis.count_gt_095;
    if (t > 0.85) ++analysis.count_gt_085;
  }
  return analysis;
}

TaskBlock evaluate_smiles_task(
    const std::vector<PredictionOutcome> &outcomes) {
  TaskBlock block;
  const double n = static_cast<double>(outcomes.size());
  block.scalars["n_records"] = n;
  std::map<OutcomeCategory, std::size_t> counts;
  for (const PredictionOutcome &outcome : outcomes) {
    ++counts[outcome.category];
  }
  auto share = [&](OutcomeCategory c) {
    return n == 0.0 ? 0.0 : 100.0 * static_cast<double>(counts[c]) / n;
  };
  block.scalars["share_cm"] = share(OutcomeCategory::CM);
  block.scalars["share_ncm"] = share(OutcomeCategory::NCM);
  block.scalars["share_cv"] = share(OutcomeCategory::CV);
  block.scalars["share_ncv"] = share(OutcomeCategory::NCV);
  block.scalars["share_invalid"] = share(OutcomeCategory::Invalid);

  TanimotoAnalysis analysis = tanimoto_analysis(outcomes);
  double match = share(OutcomeCategory::CM) + share(OutcomeCategory::NCM);
  block.scalars["match"] = match;
  block.scalars["match_ts1"] =
      match + (n == 0.0 ? 0.0 : 100.0 * analysis.count_eq_1 / n);
  block.scalars["match_ts095"] =
      match + (n == 0.0 ? 0.0 : 100.0 * analysis.count_gt_095 / n);
  block.scalars["share_ts085_of_valid_nonmatch"] =
      analysis.n_valid_nonmatch == 0
          ? 0.0
          : 100.0 * static_cast<double>(analysis.count_gt_085) /
                static_cast<double>(analysis.n_valid_nonmatch);
  block.tanimoto_histogram = analysis.histogram;
  return block;
}

namespace {

std::string side_key(const corpus::ReactionRecord &record, corpus::Task task) {
  // FS alternatives share {substrates, EC}; RS alternatives {product, EC}
  if (task == corpus::Task::FS) {
    return record.substrates + "|" + record.ec.str();
  }
  return record.product + "|" + record.ec.str();
}

}  // namespace

MetricsReport evaluate(const EvaluationInput &input,
                       std::vector<std::string> *missing_ids) {
  const corpus::Manifest &manifest = *input.manifest;
  const client::ResponseSet &responses = *input.responses;

  MetricsReport report;
  report.config_hash = manifest.config_hash;
  report.run_index = responses.run_index;

  std::vector<std::size_t> group_of(manifest.records.size());
  for (std::size_t g = 0; g < manifest.groups.size(); ++g) {
    for (std::size_t r : manifest.groups[g].members) group_of[r] = g;
  }

  // branching alternatives per {input side, EC} key, task-specific
  std::unordered_map<std::string, std::vector<std::string>> fs_truths;
  std::unordered_map<std::string, std::vector<std::string>> rs_truths;
  for (const corpus::ReactionRecord &record : manifest.records) {
    fs_truths[side_key(record, corpus::Task::FS)].push_back(record.product);
    rs_truths[side_key(record, corpus::Task::RS)].push_back(record.substrates);
  }

  std::vector<ECSample> ec_samples;
  std::vector<PredictionOutcome> fs_outcomes;
  std::vector<PredictionOutcome> rs_outcomes;

  for (std::size_t r = 0; r < manifest.records.size(); ++r) {
    std::size_t g = group_of[r];
    if (!manifest.assignment.group_included[g]) continue;
    if (manifest.assignment.group_split[g] != corpus::Split::Test) continue;
    const corpus::ReactionRecord &record = manifest.records[r];
    if (record.class7) continue;  // excluded from analyses
    corpus::Task task = manifest.assignment.group_task[g];

    auto found = responses.entries.find(record.id);
    std::string raw;
    if (found == responses.entries.end()) {
      if (missing_ids) missing_ids->push_back(record.id);
    } else if (!found->second.error) {
      raw = found->second.raw;
    }
    ParsedPrediction parsed = parse_response(raw, task);

    if (task == corpus::Task::EC) {
      ECSample sample;
      sample.truth = record.ec;
      if (parsed.ec) sample.prediction = *parsed.ec;
      ec_samples.push_back(sample);
    } else if (task == corpus::Task::FS) {
      PredictionOutcome outcome = classify_smiles_prediction(
          parsed, fs_truths[side_key(record, corpus::Task::FS)]);
      outcome.record_id = record.id;
      fs_outcomes.push_back(std::move(outcome));
    } else {
      PredictionOutcome outcome = classify_smiles_prediction(
          parsed, rs_truths[side_key(record, corpus::Task::RS)]);
      outcome.record_id = record.id;
      rs_outcomes.push_back(std::move(outcome));
    }
  }

  if (!ec_samples.empty()) report.tasks["ec"] = evaluate_ec_task(ec_samples);
  if (!fs_outcomes.empty()) {
    report.tasks["fs"] = evaluate_smiles_task(fs_outcomes);
  }
  if (!rs_outcomes.empty()) {
    report.tasks["rs"] = evaluate_smiles_task(rs_outcomes);
  }
  return report;
}

namespace {

ConfusionMatrix merge_matrices(const std::vector<const ConfusionMatrix *> &in) {
  // union of labels, element-wise mean
  std::vector<std::string> truth_labels;
  std::vector<std::string> pred_labels;
  for (const ConfusionMatrix *cm : in) {
    for (const auto &l : cm->truth_labels) {
      if (std::find(truth_labels.begin(), truth_labels.end(), l) ==
          truth_labels.end()) {
        truth_labels.push_back(l);
      }
    }
    for (const auto &l : cm->pred_labels) {
      if (l != "invalid" &&
          std::find(pred_labels.begin(), pred_labels.end(), l) ==
              pred_labels.end()) {
        pred_labels.push_back(l);
      }
    }
  }
  std::sort(truth_labels.begin(), truth_labels.end());
  std::sort(pred_labels.begin(), pred_labels.end());
  pred_labels.push_back("invalid");
  ConfusionMatrix out;
  out.truth_labels = truth_labels;
  out.pred_labels = pred_labels;
  out.counts.assign(truth_labels.size(),
                    std::vector<double>(pred_labels.size(), 0.0));
  for (const ConfusionMatrix *cm : in) {
    for (std::size_t i = 0; i < cm->truth_labels.size(); ++i) {
      auto row = std::find(truth_labels.begin(), truth_labels.end(),
                           cm->truth_labels[i]) -
                 truth_labels.begin();
      for (std::size_t j = 0; j < cm->pred_labels.size(); ++j) {
        auto col = std::find(pred_labels.begin(), pred_labels.end(),
                             cm->pred_labels[j]) -
                   pred_labels.begin();
        out.counts[row][col] += cm->counts[i][j];
      }
    }
  }
  for (auto &row : out.counts) {
    for (double &v : row) v /= static_cast<double>(in.size());
  }
  return out;
}

}  // namespace

MetricsReport aggregate_runs(const std::vector<MetricsReport> &reports) {
  if (reports.empty()) throw ConfigMismatch("no reports to aggregate");
  for (const MetricsReport &r : reports) {
    if (r.config_hash != reports.front().config_hash) {
      throw ConfigMismatch("reports built from different configurations");
    }
  }
  MetricsReport out;
  out.config_hash = reports.front().config_hash;
  out.n_runs = static_cast<int>(reports.size());
  out.run_index = 0;

  std::vector<std::string> task_keys;
  for (const auto &[key, block] : reports.front().tasks) {
    task_keys.push_back(key);
  }
  for (const std::string &key : task_keys) {
    TaskBlock merged;
    std::vector<const TaskBlock *> blocks;
    for (const MetricsReport &r : reports) {
      auto it = r.tasks.find(key);
      if (it != r.tasks.end()) blocks.push_back(&it->second);
    }
    for (const auto &[name, value] : blocks.front()->scalars) {
      double sum = 0.0;
      for (const TaskBlock *b : blocks) sum += b->scalars.at(name);
      double mean = sum / static_cast<double>(blocks.size());
      merged.scalars[name] = mean;
      if (blocks.size() >= 2) {
        double ss = 0.0;
        for (const TaskBlock *b : blocks) {
          double d = b->scalars.at(name) - mean;
          ss += d * d;
        }
        merged.scalar_stddev[name] =
            std::sqrt(ss / static_cast<double>(blocks.size() - 1));
      }
    }
    if (!blocks.front()->tanimoto_histogram.empty()) {
      merged.tanimoto_histogram.assign(
          blocks.front()->tanimoto_histogram.size(), 0.0);
      for (const TaskBlock *b : blocks) {
        for (std::size_t i = 0; i < merged.tanimoto_histogram.size(); ++i) {
          merged.tanimoto_histogram[i] += b->tanimoto_histogram[i];
        }
      }
      for (double &v : merged.tanimoto_histogram) {
        v /= static_cast<double>(blocks.size());
      }
    }
    for (const auto &[name, cm] : blocks.front()->matrices) {
      std::vector<const ConfusionMatrix *> matrices;
      for (const TaskBlock *b : blocks) {
        auto it = b->matrices.find(name);
        if (it != b->matrices.end()) matrices.push_back(&it->second);
      }
      merged.matrices[name] = merge_matrices(matrices);
    }
    out.tasks[key] = std::move(merged);
  }
  return out;
}

}  // namespace enzybench::eval
