#include "enzybench/baseline/pipeline.hpp"

#include <algorithm>

#include "enzybench/chem/smiles.hpp"

namespace enzybench::baseline {

namespace {

using corpus::Split;
using corpus::Task;

struct TaskRows {
  std::vector<std::size_t> train;  // record indices
  std::vector<std::size_t> test;
};

TaskRows collect_rows(const corpus::Manifest &manifest, Task task) {
  TaskRows rows;
  std::vector<std::size_t> group_of(manifest.records.size());
  for (std::size_t g = 0; g < manifest.groups.size(); ++g) {
    for (std::size_t r : manifest.groups[g].members) group_of[r] = g;
  }
  for (std::size_t r = 0; r < manifest.records.size(); ++r) {
    std::size_t g = group_of[r];
    if (!manifest.assignment.group_included[g]) continue;
    if (manifest.assignment.group_task[g] != task) continue;
    if (manifest.assignment.group_split[g] == Split::Train) {
      rows.train.push_back(r);
    } else {
      rows.test.push_back(r);
    }
  }
  return rows;
}

ECEncoder fit_encoder(const corpus::Manifest &manifest,
                      const TaskRows &rows, double scale) {
  std::vector<corpus::ECNumber> vocabulary;
  vocabulary.reserve(manifest.records.size());
  for (const corpus::ReactionRecord &r : manifest.records) {
    vocabulary.push_back(r.ec);
  }
  std::vector<corpus::ECNumber> train;
  train.reserve(rows.train.size());
  for (std::size_t r : rows.train) train.push_back(manifest.records[r].ec);
  return ECEncoder::fit(vocabulary, train, scale);
}

bool check_non_increasing(const GBDTModel &model) {
  if (model.loss != Loss::Squared) return true;  // exact only for squared
  for (const EnsembleModel &ensemble : model.outputs) {
    for (std::size_t i = 1; i < ensemble.train_loss.size(); ++i) {
      if (ensemble.train_loss[i] > ensemble.train_loss[i - 1] + 1e-9) {
        return false;
      }
    }
  }
  return true;
}

int max_rounds(const GBDTModel &model) {
  int rounds = 0;
  for (const EnsembleModel &e : model.outputs) {
    rounds = std::max(rounds, e.rounds_used);
  }
  return rounds;
}

BaselineRun run_ec_task(const corpus::Manifest &manifest,
                        const TaskRows &rows, const BaselineConfig &config,
                        GBDTModel *keep_model) {
  ECEncoder encoder = fit_encoder(manifest, rows, config.ec_scale);
  const int d = config.reaction_bits;
  FeatureMatrix X(rows.train.size(), d);
  TargetMatrix Y(rows.train.size(), 4);
  for (std::size_t i = 0; i < rows.train.size(); ++i) {
    const corpus::ReactionRecord &record = manifest.records[rows.train[i]];
    X.row(i) = fingerprint_to_features(
        reaction_fingerprint(record, config.reaction_bits, config.radius));
    auto encoded = encoder.encode(record.ec);
    for (int k = 0; k < 4; ++k) Y(i, k) = static_cast<float>(encoded[k]);
  }
  GBDTModel model = train_gbdt(X, Y, Loss::Squared, config.gbdt);

  std::vector<eval::ECSample> samples;
  Eigen::VectorXf row(d);
  for (std::size_t r : rows.test) {
    const corpus::ReactionRecord &record = manifest.records[r];
    if (record.class7) continue;
    row = fingerprint_to_features(
        reaction_fingerprint(record, config.reaction_bits, config.radius));
    std::vector<double> raw = model.predict(row.data());
    eval::ECSample sample;
    sample.truth = record.ec;
    sample.prediction = encoder.decode({raw[0], raw[1], raw[2], raw[3]});
    samples.push_back(sample);
  }
  BaselineRun run;
  run.n_train = rows.train.size();
  run.n_test = samples.size();
  run.block = eval::evaluate_ec_task(samples);
  run.train_loss_non_increasing = check_non_increasing(model);
  run.rounds_used_max = max_rounds(model);
  if (keep_model) *keep_model = std::move(model);
  return run;
}

BaselineRun run_molecule_task(const corpus::Manifest &manifest, Task task,
                              const TaskRows &rows,
                              const BaselineConfig &config,
                              GBDTModel *keep_model) {
  ECEncoder encoder = fit_encoder(manifest, rows, config.ec_scale);
  const int ec_cols = config.include_ec ? 4 : 0;
  const int d = config.mol_bits + ec_cols;

  auto input_fp = [&](const corpus::ReactionRecord &record) {
    const std::string &side =
        task == Task::FS ? record.substrates : record.product;
    return chem::circular_fingerprint(chem::parse_smiles(side),
                                      config.mol_bits, config.radius);
  };
  auto output_fp = [&](const corpus::ReactionRecord &record) {
    const std::string &side =
        task == Task::FS ? record.product : record.substrates;
    return chem::circular_fingerprint(chem::parse_smiles(side),
                                      config.mol_bits, config.radius);
  };
  auto fill_row = [&](const corpus::ReactionRecord &record, float *dst) {
    chem::BitFingerprint fp = input_fp(record);
    for (int i = 0; i < config.mol_bits; ++i) {
      dst[i] = fp.test(i) ? 1.0f : 0.0f;
    }
    if (config.include_ec) {
      auto encoded = encoder.encode(record.ec);
      for (int k = 0; k < 4; ++k) {
        dst[config.mol_bits + k] = static_cast<float>(encoded[k]);
      }
    }
  };

  FeatureMatrix X(rows.train.size(), d);
  TargetMatrix Y(rows.train.size(), config.mol_bits);
  std::vector<float> buffer(d);
  for (std::size_t i = 0; i < rows.train.size(); ++i) {
    const corpus::ReactionRecord &record = manifest.records[rows.train[i]];
    fill_row(record, buffer.data());
    for (int k = 0; k < d; ++k) X(i, k) = buffer[k];
    chem::BitFingerprint fp = output_fp(record);
    for (int k = 0; k < config.mol_bits; ++k) {
      Y(i, k) = fp.test(k) ? 1.0f : 0.0f;
    }
  }
  GBDTModel model = train_gbdt(X, Y, Loss::Logistic, config.gbdt);

  std::size_t n_test = 0;
  std::size_t exact = 0;
  for (std::size_t r : rows.test) {
    const corpus::ReactionRecord &record = manifest.records[r];
    if (record.class7) continue;
    fill_row(record, buffer.data());
    std::vector<double> probs = model.predict(buffer.data());
    chem::BitFingerprint truth = output_fp(record);
    bool all_equal = true;
    for (int k = 0; k < config.mol_bits; ++k) {
      bool bit = probs[k] >= 0.5;
      if (bit != truth.test(k)) {
        all_equal = false;
        break;
      }
    }
    ++n_test;
    if (all_equal) ++exact;
  }
  BaselineRun run;
  run.n_train = rows.train.size();
  run.n_test = n_test;
  run.block.scalars["n_records"] = static_cast<double>(n_test);
  run.block.scalars["match"] =
      n_test == 0 ? 0.0
                  : 100.0 * static_cast<double>(exact) /
                        static_cast<double>(n_test);
  run.train_loss_non_increasing = check_non_increasing(model);
  run.rounds_used_max = max_rounds(model);
  if (keep_model) *keep_model = std::move(model);
  return run;
}

}  // namespace

BaselineRun run_baseline_task(const corpus::Manifest &manifest, Task task,
                              const BaselineConfig &config,
                              GBDTModel *keep_model) {
  TaskRows rows = collect_rows(manifest, task);
  if (rows.train.size() < 2 || rows.test.empty()) {
    throw InsufficientData("task " + corpus::to_string(task) +
                           " lacks train or test records");
  }
  if (task == Task::EC) {
    return run_ec_task(manifest, rows, config, keep_model);
  }
  return run_molecule_task(manifest, task, rows, config, keep_model);
}

std::vector<std::pair<double, BaselineRun>> ec_scale_ablation(
    const corpus::Manifest &manifest, Task task,
    const std::vector<double> &factors, const BaselineConfig &config) {
  std::vector<std::pair<double, BaselineRun>> table;
  for (double factor : factors) {
    BaselineConfig variant = config;
    variant.ec_scale = factor;
    table.push_back({factor, run_baseline_task(manifest, task, variant)});
  }
  return table;
}

}  // namespace enzybench::baseline
