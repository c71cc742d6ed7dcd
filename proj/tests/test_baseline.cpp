#include <cmath>
#include <sstream>

#include <doctest.h>

#include "enzybench/baseline/features.hpp"
#include "enzybench/baseline/gbdt.hpp"
#include "enzybench/baseline/pipeline.hpp"
#include "enzybench/corpus/manifest.hpp"
#include "enzybench/synth/synth.hpp"
#include "enzybench/util/config.hpp"
#include "enzybench/util/rng.hpp"

using namespace enzybench;
using namespace enzybench::baseline;
using corpus::ECNumber;

namespace {

corpus::Manifest synth_manifest(std::uint64_t seed, std::size_t n) {
  synth::SynthConfig config;
  config.seed = seed;
  config.n_unique = n;
  std::istringstream input(synth::synth_corpus_text(config));
  corpus::IngestReport report;
  corpus::Manifest manifest;
  manifest.records = corpus::ingest_stream(input, report);
  manifest.groups = corpus::group_reactions(manifest.records);
  corpus::SplitConfig split_config;
  split_config.seed = seed;
  manifest.assignment =
      corpus::split_groups(manifest.groups, manifest.records, split_config);
  corpus::assign_tasks(manifest.assignment, manifest.groups,
                       manifest.records);
  manifest.config_json = "{}";
  manifest.config_hash = config_hash(manifest.config_json);
  return manifest;
}

}  // namespace

TEST_CASE("reaction fingerprint difference semantics") {
  corpus::ReactionRecord record;
  record.substrates = "CCO";
  record.product = "CCO";  // constructed directly to probe the XOR
  chem::BitFingerprint fp = reaction_fingerprint(record, 1024, 2);
  CHECK(fp.length() == 1024);
  CHECK(fp.popcount() == 0);  // self-cancellation

  corpus::ReactionRecord real = corpus::make_record(
      "CCO.CC", "CCC=O", ECNumber::parse("1.1.1.1"));
  CHECK(reaction_fingerprint(real).popcount() > 0);

  // substrate order never matters
  corpus::ReactionRecord swapped = real;
  swapped.substrates = "CC.CCO";
  chem::BitFingerprint a = reaction_fingerprint(real);
  chem::BitFingerprint b = reaction_fingerprint(swapped);
  CHECK(a == b);
}

TEST_CASE("EC encoder round trips and standardizes") {
  std::vector<ECNumber> vocabulary;
  for (const char *s : {"1.1.1.1", "2.3.4.5", "3.5.99.12", "6.2.1.3",
                        "4.4.4.4", "7.1.1.1"}) {
    vocabulary.push_back(ECNumber::parse(s));
  }
  std::vector<ECNumber> train(vocabulary.begin(), vocabulary.begin() + 4);
  ECEncoder encoder = ECEncoder::fit(vocabulary, train, 1.0);
  for (const ECNumber &ec : train) {
    CHECK(encoder.decode(encoder.encode(ec)) == ec);
  }
  // round trip holds for every vocabulary EC at any positive scale
  for (double scale : {0.5, 1.0, 5.0, 100.0}) {
    ECEncoder scaled = ECEncoder::fit(vocabulary, train, scale);
    for (const ECNumber &ec : vocabulary) {
      CHECK(scaled.decode(scaled.encode(ec)) == ec);
    }
  }
  CHECK_THROWS_AS(encoder.encode(ECNumber::parse("5.1.1.1")), UnknownDigit);
}

TEST_CASE("EC encoder degenerate scale and z-scores") {
  // first digits 2,6,2,6: labels 1 and 5 against vocabulary 1..7,
  // so the label mean is 3 and the population stddev 2
  std::vector<ECNumber> vocabulary;
  for (int c = 1; c <= 7; ++c) {
    vocabulary.push_back(ECNumber::parse(std::to_string(c) + ".1.1.1"));
  }
  std::vector<ECNumber> train = {
      ECNumber::parse("2.1.1.1"), ECNumber::parse("6.1.1.1"),
      ECNumber::parse("2.1.1.1"), ECNumber::parse("6.1.1.1")};
  ECEncoder encoder = ECEncoder::fit(vocabulary, train, 1.0);
  CHECK(encoder.encode(ECNumber::parse("6.1.1.1"))[0] ==
        doctest::Approx(1.0));
  CHECK(encoder.encode(ECNumber::parse("2.1.1.1"))[0] ==
        doctest::Approx(-1.0));

  // scale factor 0 collapses every encoding
  ECEncoder degenerate = ECEncoder::fit(vocabulary, train, 0.0);
  auto a = degenerate.encode(ECNumber::parse("2.1.1.1"));
  auto b = degenerate.encode(ECNumber::parse("6.1.1.1"));
  CHECK(a == b);
}

TEST_CASE("gbdt fits a separable rule quickly") {
  // y = x[0] over random binary features
  Rng rng(5);
  int n = 200, d = 10;
  FeatureMatrix X(n, d);
  TargetMatrix Y(n, 1);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < d; ++j) {
      X(i, j) = rng.unit() < 0.5 ? 0.0f : 1.0f;
    }
    Y(i, 0) = X(i, 0);
  }
  GBDTConfig config;
  config.rounds = 10;
  config.seed = 1;
  GBDTModel model = train_gbdt(X, Y, Loss::Squared, config);
  int correct = 0;
  for (int i = 0; i < n; ++i) {
    Eigen::VectorXf row = X.row(i);
    double pred = model.predict(row.data())[0];
    if ((pred >= 0.5) == (Y(i, 0) >= 0.5f)) ++correct;
  }
  CHECK(correct == n);
}

TEST_CASE("gbdt training loss is non-increasing under squared loss") {
  Rng rng(17);
  int n = 300, d = 12;
  FeatureMatrix X(n, d);
  TargetMatrix Y(n, 2);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < d; ++j) {
      X(i, j) = static_cast<float>(rng.unit());
    }
    Y(i, 0) = X(i, 1) * 2.0f + static_cast<float>(rng.unit()) * 0.3f;
    Y(i, 1) = static_cast<float>(rng.unit());  // pure noise column
  }
  GBDTConfig config;
  config.rounds = 40;
  config.seed = 2;
  GBDTModel model = train_gbdt(X, Y, Loss::Squared, config);
  for (const EnsembleModel &ensemble : model.outputs) {
    for (std::size_t r = 1; r < ensemble.train_loss.size(); ++r) {
      CHECK(ensemble.train_loss[r] <= ensemble.train_loss[r - 1] + 1e-9);
    }
  }
}

TEST_CASE("constant targets become constant predictors") {
  FeatureMatrix X(50, 4);
  TargetMatrix Y(50, 1);
  Rng rng(3);
  for (int i = 0; i < 50; ++i) {
    for (int j = 0; j < 4; ++j) X(i, j) = static_cast<float>(rng.unit());
    Y(i, 0) = 2.5f;
  }
  GBDTConfig config;
  config.seed = 9;
  GBDTModel model = train_gbdt(X, Y, Loss::Squared, config);
  CHECK(model.outputs[0].rounds_used == 0);
  CHECK(model.outputs[0].trees.empty());
  Eigen::VectorXf row = X.row(0);
  CHECK(model.predict(row.data())[0] == doctest::Approx(2.5));
}

TEST_CASE("early stopping reacts to an unlearnable validation slice") {
  // pure noise target: validation loss cannot keep improving for long
  Rng rng(23);
  int n = 400, d = 8;
  FeatureMatrix X(n, d);
  TargetMatrix Y(n, 1);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < d; ++j) {
      X(i, j) = static_cast<float>(rng.unit());
    }
    Y(i, 0) = static_cast<float>(rng.unit());
  }
  GBDTConfig config;
  config.rounds = 100;
  config.patience = 5;
  config.seed = 4;
  GBDTModel model = train_gbdt(X, Y, Loss::Squared, config);
  CHECK(model.outputs[0].early_stop_round.has_value());
  CHECK(model.outputs[0].rounds_used < 100);
  CHECK(model.outputs[0].rounds_used ==
        static_cast<int>(model.outputs[0].trees.size()));
}

TEST_CASE("gbdt logistic loss separates bits") {
  Rng rng(31);
  int n = 240, d = 6;
  FeatureMatrix X(n, d);
  TargetMatrix Y(n, 2);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < d; ++j) {
      X(i, j) = rng.unit() < 0.5 ? 0.0f : 1.0f;
    }
    Y(i, 0) = X(i, 2);
    Y(i, 1) = 1.0f - X(i, 2);
  }
  GBDTConfig config;
  config.rounds = 30;
  config.seed = 6;
  GBDTModel model = train_gbdt(X, Y, Loss::Logistic, config);
  int correct = 0;
  for (int i = 0; i < n; ++i) {
    Eigen::VectorXf row = X.row(i);
    auto probs = model.predict(row.data());
    if ((probs[0] >= 0.5) == (Y(i, 0) > 0.5f)) ++correct;
    if ((probs[1] >= 0.5) == (Y(i, 1) > 0.5f)) ++correct;
  }
  CHECK(correct == 2 * n);
}

TEST_CASE("gbdt json persistence preserves predictions") {
  Rng rng(41);
  int n = 120, d = 7;
  FeatureMatrix X(n, d);
  TargetMatrix Y(n, 2);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < d; ++j) {
      X(i, j) = static_cast<float>(rng.unit());
    }
    Y(i, 0) = X(i, 0) + X(i, 3);
    Y(i, 1) = X(i, 1) > 0.5f ? 1.0f : 0.0f;
  }
  GBDTConfig config;
  config.rounds = 15;
  config.seed = 8;
  GBDTModel model = train_gbdt(X, Y, Loss::Squared, config);
  GBDTModel loaded = gbdt_from_json(gbdt_to_json(model));
  for (int i = 0; i < n; ++i) {
    Eigen::VectorXf row = X.row(i);
    auto a = model.predict(row.data());
    auto b = loaded.predict(row.data());
    CHECK(a[0] == doctest::Approx(b[0]));
    CHECK(a[1] == doctest::Approx(b[1]));
  }
}

TEST_CASE("baseline pipeline runs the EC task end to end") {
  corpus::Manifest manifest = synth_manifest(71, 700);
  BaselineConfig config;
  config.gbdt.seed = 5;
  BaselineRun run = run_baseline_task(manifest, corpus::Task::EC, config);
  CHECK(run.n_train > 100);
  CHECK(run.n_test > 30);
  CHECK(run.train_loss_non_increasing);
  CHECK(run.rounds_used_max <= 100);
  CHECK(run.block.scalars.count("ec1_macro") == 1);
  CHECK(run.block.scalars.at("ec1_macro") >= 0.0);
  CHECK(run.block.scalars.at("ec1_macro") <= 100.0);
  // depth accuracies are nested prefixes, so they can only decay
  CHECK(run.block.scalars.at("ec1_micro") >=
        run.block.scalars.at("ec2_micro"));
  CHECK(run.block.scalars.at("ec2_micro") >=
        run.block.scalars.at("ec3_micro"));
}

TEST_CASE("scale factor zero equals dropping the EC columns") {
  corpus::Manifest manifest = synth_manifest(83, 400);
  BaselineConfig zero_scale;
  zero_scale.gbdt.seed = 11;
  zero_scale.ec_scale = 0.0;
  BaselineRun with_constant_ec =
      run_baseline_task(manifest, corpus::Task::FS, zero_scale);

  BaselineConfig removed = zero_scale;
  removed.ec_scale = 1.0;
  removed.include_ec = false;
  BaselineRun without_ec =
      run_baseline_task(manifest, corpus::Task::FS, removed);

  CHECK(with_constant_ec.block.scalars.at("match") ==
        without_ec.block.scalars.at("match"));
  CHECK(with_constant_ec.n_test == without_ec.n_test);
}

TEST_CASE("ec scale ablation emits one row per factor") {
  corpus::Manifest manifest = synth_manifest(97, 300);
  BaselineConfig config;
  config.gbdt.seed = 13;
  config.gbdt.rounds = 20;  // keep the small-corpus scan quick
  auto table = ec_scale_ablation(manifest, corpus::Task::FS,
                                 {0.0, 1.0, 5.0}, config);
  REQUIRE(table.size() == 3);
  CHECK(table[0].first == 0.0);
  CHECK(table[1].first == 1.0);
  for (const auto &[factor, run] : table) {
    CHECK(run.block.scalars.count("match") == 1);
  }
}

TEST_CASE("encoder statistics never look at test records") {
  corpus::Manifest manifest = synth_manifest(59, 500);
  // recompute train-only statistics independently and compare encodings
  std::vector<std::size_t> group_of(manifest.records.size());
  for (std::size_t g = 0; g < manifest.groups.size(); ++g) {
    for (std::size_t r : manifest.groups[g].members) group_of[r] = g;
  }
  std::vector<ECNumber> vocabulary;
  std::vector<ECNumber> train_ecs;
  for (std::size_t r = 0; r < manifest.records.size(); ++r) {
    vocabulary.push_back(manifest.records[r].ec);
    std::size_t g = group_of[r];
    if (manifest.assignment.group_split[g] == corpus::Split::Train &&
        manifest.assignment.group_task[g] == corpus::Task::EC) {
      train_ecs.push_back(manifest.records[r].ec);
    }
  }
  ECEncoder from_train = ECEncoder::fit(vocabulary, train_ecs, 1.0);
  std::vector<ECNumber> with_test = train_ecs;
  for (std::size_t r = 0; r < manifest.records.size(); ++r) {
    if (manifest.assignment.group_split[group_of[r]] == corpus::Split::Test) {
      with_test.push_back(manifest.records[r].ec);
    }
  }
  ECEncoder polluted = ECEncoder::fit(vocabulary, with_test, 1.0);
  // the two differ somewhere, demonstrating the statistics are train-bound
  bool any_difference = false;
  for (const ECNumber &ec : train_ecs) {
    if (from_train.encode(ec) != polluted.encode(ec)) {
      any_difference = true;
      break;
    }
  }
  CHECK(any_difference);
}
