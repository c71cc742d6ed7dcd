#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "enzybench/baseline/pipeline.hpp"
#include "enzybench/client/client.hpp"
#include "enzybench/corpus/manifest.hpp"
#include "enzybench/eval/report.hpp"
#include "enzybench/lora/lora.hpp"
#include "enzybench/prompt/render.hpp"
#include "enzybench/synth/synth.hpp"
#include "enzybench/util/config.hpp"

namespace {

using nlohmann::ordered_json;
namespace fs = std::filesystem;
using namespace enzybench;

void write_text(const std::string &path, const std::string &text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out << text;
}

std::string read_text(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path);
  return std::string((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
}

// every run directory gets an index of its artifacts and the resolved
// configuration they were produced with
void write_run_index(const std::string &out_dir, const ordered_json &config,
                     const std::vector<std::string> &artifacts) {
  ordered_json doc;
  doc["schema"] = "enzybench.run_manifest/1";
  doc["config"] = config;
  doc["config_hash"] = config_hash(config.dump());
  doc["artifacts"] = artifacts;
  write_text(out_dir + "/manifest.json", doc.dump(2) + "\n");
}

ordered_json load_config_file(const std::string &path) {
  if (path.empty()) return ordered_json::object();
  return ordered_json::parse(read_text(path));
}

// flags > config file > defaults
template <typename T>
T resolved(const CLI::Option *opt, const ordered_json &file_config,
           const std::string &key, T flag_value) {
  if (opt && opt->count() > 0) return flag_value;
  if (file_config.contains(key)) return file_config[key].get<T>();
  return flag_value;
}

struct RecordsArtifact {
  std::vector<corpus::ReactionRecord> records;
  std::string config_hash;
  ordered_json config;
};

void save_records(const RecordsArtifact &artifact,
                  const corpus::IngestReport &report,
                  const std::string &path) {
  ordered_json doc;
  doc["schema"] = "enzybench.records/1";
  doc["config"] = artifact.config;
  doc["config_hash"] = artifact.config_hash;
  ordered_json records = ordered_json::array();
  for (const auto &r : artifact.records) {
    ordered_json rec;
    rec["id"] = r.id;
    rec["substrates"] = r.substrates;
    rec["product"] = r.product;
    rec["ec"] = r.ec.str();
    rec["class7"] = r.class7;
    records.push_back(std::move(rec));
  }
  doc["records"] = std::move(records);
  ordered_json issues = ordered_json::array();
  for (const auto &issue : report.issues) {
    issues.push_back({{"line", issue.line}, {"message", issue.message}});
  }
  doc["ingest_report"] = {{"lines_total", report.lines_total},
                          {"lines_parsed", report.lines_parsed},
                          {"duplicates_removed", report.duplicates_removed},
                          {"skipped_by_source", report.skipped_by_source},
                          {"issues", std::move(issues)}};
  write_text(path, doc.dump(2) + "\n");
}

RecordsArtifact load_records(const std::string &path) {
  ordered_json doc = ordered_json::parse(read_text(path));
  if (doc.value("schema", "") != "enzybench.records/1") {
    throw SchemaError("not an enzybench records file: " + path);
  }
  RecordsArtifact artifact;
  artifact.config = doc.value("config", ordered_json::object());
  artifact.config_hash = doc.value("config_hash", "");
  for (const auto &rec : doc.at("records")) {
    corpus::ReactionRecord r;
    r.id = rec.at("id").get<std::string>();
    r.substrates = rec.at("substrates").get<std::string>();
    r.product = rec.at("product").get<std::string>();
    r.ec = corpus::ECNumber::parse(rec.at("ec").get<std::string>());
    r.class7 = rec.value("class7", false);
    artifact.records.push_back(std::move(r));
  }
  return artifact;
}

int cmd_ingest(const std::string &input, const std::string &out_dir,
               const std::string &source) {
  fs::create_directories(out_dir);
  corpus::IngestOptions options;
  if (!source.empty()) options.source_filter = source;
  corpus::IngestReport report;
  RecordsArtifact artifact;
  artifact.records = corpus::ingest_file(input, report, options);
  artifact.config = {{"command", "ingest"},
                     {"input", input},
                     {"source", source}};
  artifact.config_hash = config_hash(artifact.config.dump());
  save_records(artifact, report, out_dir + "/records.json");
  write_run_index(out_dir, artifact.config, {"records.json"});
  std::cout << "ingested " << artifact.records.size() << " records ("
            << report.duplicates_removed << " duplicates removed, "
            << report.issues.size() << " lines rejected)\n";
  return 0;
}

int cmd_split(const std::string &records_path, const std::string &out_dir,
              std::uint64_t seed, double train_fraction,
              std::uint64_t n_per_task) {
  fs::create_directories(out_dir);
  RecordsArtifact artifact = load_records(records_path);
  auto groups = corpus::group_reactions(artifact.records);
  corpus::SplitConfig split_config;
  split_config.seed = seed;
  split_config.train_fraction = train_fraction;
  auto assignment =
      corpus::split_groups(groups, artifact.records, split_config);
  corpus::assign_tasks(assignment, groups, artifact.records);
  if (n_per_task > 0) {
    assignment = corpus::subsample(assignment, groups, artifact.records,
                                   n_per_task, seed);
  }
  corpus::Manifest manifest;
  manifest.records = std::move(artifact.records);
  manifest.groups = std::move(groups);
  manifest.assignment = std::move(assignment);
  ordered_json config = {{"command", "split"},
                         {"upstream", artifact.config_hash},
                         {"seed", seed},
                         {"train_fraction", train_fraction},
                         {"n_per_task", n_per_task}};
  manifest.config_json = config.dump();
  manifest.config_hash = config_hash(manifest.config_json);
  corpus::save_manifest(manifest, out_dir + "/split_manifest.json");
  write_run_index(out_dir, config, {"split_manifest.json"});
  std::size_t train = 0, test = 0;
  for (std::size_t g = 0; g < manifest.groups.size(); ++g) {
    if (!manifest.assignment.group_included[g]) continue;
    auto n = manifest.groups[g].size();
    (manifest.assignment.group_split[g] == corpus::Split::Train ? train
                                                                : test) += n;
  }
  std::cout << "split " << manifest.groups.size() << " groups: " << train
            << " train / " << test << " test records\n";
  return 0;
}

int cmd_gen_prompts(const std::string &manifest_path,
                    const std::string &out_dir, const std::string &mode,
                    const std::string &templates_path, std::uint64_t seed) {
  fs::create_directories(out_dir);
  corpus::Manifest manifest = corpus::load_manifest(manifest_path);
  prompt::TemplatePool pool = templates_path.empty()
                                  ? prompt::TemplatePool::builtin()
                                  : prompt::TemplatePool::load(templates_path);
  prompt::CorpusMode corpus_mode = mode == "mt"
                                       ? prompt::CorpusMode::MultiTask
                                       : prompt::CorpusMode::SingleTask;
  prompt::EmitReport report =
      prompt::emit_corpus(manifest, pool, corpus_mode, out_dir, seed);
  ordered_json config = {{"command", "gen-prompts"},
                         {"upstream", manifest.config_hash},
                         {"mode", mode},
                         {"seed", seed}};
  std::vector<std::string> artifacts;
  ordered_json counts;
  for (const auto &[file, count] : report.file_counts) {
    artifacts.push_back(file);
    counts[file] = count;
  }
  ordered_json meta;
  meta["schema"] = "enzybench.corpus_meta/1";
  meta["config"] = config;
  meta["config_hash"] = manifest.config_hash;
  meta["file_counts"] = counts;
  meta["answer_leak_count"] = report.answer_leak_count;
  meta["answer_leak_samples"] = report.answer_leak_samples;
  write_text(out_dir + "/corpus_meta.json", meta.dump(2) + "\n");
  artifacts.push_back("corpus_meta.json");
  write_run_index(out_dir, config, artifacts);
  for (const auto &[file, count] : report.file_counts) {
    std::cout << file << ": " << count << " records\n";
  }
  if (report.answer_leak_count > 0) {
    std::cout << "warning: " << report.answer_leak_count
              << " train answers equal a test-split SMILES (cross-EC "
                 "collisions; see corpus_meta.json)\n";
  }
  return 0;
}

int cmd_infer(const std::string &corpus_path, const std::string &out_path,
              const client::CompletionParams &params) {
  auto corpus = prompt::load_chat_jsonl(corpus_path);
  client::ResponseSet responses =
      client::run_inference(corpus, params, out_path);
  std::size_t failures = 0;
  for (const auto &[id, entry] : responses.entries) {
    if (entry.error) ++failures;
  }
  std::cout << "collected " << responses.entries.size() << " responses ("
            << failures << " failures) -> " << out_path << "\n";
  return failures == 0 ? 0 : 1;
}

int cmd_evaluate(const std::string &manifest_path,
                 const std::string &replay_path, const std::string &out_dir,
                 const std::string &corpus_path) {
  fs::create_directories(out_dir);
  corpus::Manifest manifest = corpus::load_manifest(manifest_path);
  client::ResponseSet responses = client::replay(replay_path);
  if (!corpus_path.empty()) {
    auto corpus = prompt::load_chat_jsonl(corpus_path);
    auto coverage = client::check_coverage(responses, corpus);
    for (const std::string &id : coverage.missing_ids) {
      std::cout << "warning: no response for record " << id << "\n";
    }
    for (const std::string &id : coverage.extra_ids) {
      std::cout << "warning: response for unknown record " << id << "\n";
    }
  }
  eval::EvaluationInput input;
  input.manifest = &manifest;
  input.responses = &responses;
  std::vector<std::string> missing;
  eval::MetricsReport report = eval::evaluate(input, &missing);
  for (const std::string &id : missing) {
    std::cout << "warning: test record " << id
              << " missing from response set (scored invalid)\n";
  }
  eval::save_metrics_report(report, out_dir + "/metrics_report.json");
  eval::write_csv_tables(report, out_dir, "metrics");
  write_run_index(out_dir,
                  {{"command", "evaluate"},
                   {"upstream", manifest.config_hash},
                   {"replay", replay_path}},
                  {"metrics_report.json"});
  for (const auto &[task, block] : report.tasks) {
    std::cout << task << ":";
    for (const std::string &key :
         {"ec1_macro", "ec2_macro", "ec3_macro", "match", "match_ts1",
          "share_invalid"}) {
      auto it = block.scalars.find(key);
      if (it != block.scalars.end()) {
        std::cout << " " << key << "=" << it->second;
      }
    }
    std::cout << "\n";
  }
  return 0;
}

int cmd_baseline(const std::string &manifest_path, const std::string &out_dir,
                 const std::string &task_name, bool ablation,
                 std::uint64_t seed, const std::string &model_out) {
  fs::create_directories(out_dir);
  corpus::Manifest manifest = corpus::load_manifest(manifest_path);
  baseline::BaselineConfig config;
  config.gbdt.seed = seed;

  std::vector<corpus::Task> tasks;
  if (task_name == "all") {
    tasks = {corpus::Task::EC, corpus::Task::FS, corpus::Task::RS};
  } else {
    tasks = {corpus::task_from_string(task_name)};
  }

  eval::MetricsReport report;
  report.config_hash = manifest.config_hash;
  for (corpus::Task task : tasks) {
    baseline::GBDTModel model;
    baseline::BaselineRun run = baseline::run_baseline_task(
        manifest, task, config, model_out.empty() ? nullptr : &model);
    run.block.scalars["rounds_used_max"] =
        static_cast<double>(run.rounds_used_max);
    report.tasks[corpus::to_string(task)] = run.block;
    if (!model_out.empty()) {
      baseline::save_gbdt(model,
                          out_dir + "/" + corpus::to_string(task) + "_" +
                              model_out);
    }
    std::cout << corpus::to_string(task) << ": n_train=" << run.n_train
              << " n_test=" << run.n_test;
    for (const std::string &key : {"ec1_macro", "ec2_macro", "ec3_macro",
                                   "match"}) {
      auto it = run.block.scalars.find(key);
      if (it != run.block.scalars.end()) {
        std::cout << " " << key << "=" << it->second;
      }
    }
    std::cout << (run.train_loss_non_increasing ? "" : " LOSS-NOT-MONOTONE")
              << "\n";
  }
  eval::save_metrics_report(report, out_dir + "/baseline_report.json");
  std::vector<std::string> artifacts{"baseline_report.json"};

  if (ablation) {
    std::vector<double> factors{0, 1, 5, 10, 50, 100};
    auto table = baseline::ec_scale_ablation(manifest, corpus::Task::FS,
                                             factors, config);
    std::ofstream csv(out_dir + "/ec_scale_ablation.csv", std::ios::binary);
    csv << "factor,match,reference\n";
    for (const auto &[factor, run] : table) {
      csv << factor << "," << run.block.scalars.at("match") << ","
          << (factor == 1.0 ? "ref" : "") << "\n";
    }
    artifacts.push_back("ec_scale_ablation.csv");
  }
  write_run_index(out_dir,
                  {{"command", "baseline"},
                   {"upstream", manifest.config_hash},
                   {"task", task_name},
                   {"seed", seed}},
                  artifacts);
  return 0;
}

int cmd_lora_calc(const std::string &arch_name, const std::string &setup,
                  int rank, int alpha, const std::string &presets_path) {
  std::vector<lora::ArchConfig> presets =
      presets_path.empty() ? lora::builtin_presets()
                           : lora::load_presets(presets_path);
  const lora::ArchConfig *arch = nullptr;
  for (const auto &preset : presets) {
    if (preset.name == arch_name) arch = &preset;
  }
  if (!arch) {
    std::string known;
    for (const auto &preset : presets) known += " " + preset.name;
    throw FormatError("unknown architecture '" + arch_name + "'; available:" +
                      known);
  }
  std::vector<lora::AdapterTargets> setups;
  if (setup == "all") {
    setups = {lora::AdapterTargets::Light, lora::AdapterTargets::Attention,
              lora::AdapterTargets::Default};
  } else {
    setups = {lora::targets_from_string(setup)};
  }
  for (lora::AdapterTargets targets : setups) {
    lora::AdapterPlan plan;
    plan.rank = rank;
    plan.alpha = alpha;
    plan.targets = targets;
    lora::TrainableCount count = lora::count_trainable(*arch, plan);
    char percent[32];
    std::snprintf(percent, sizeof percent, "%.2f%%", count.percent_of_base);
    std::cout << "LoRA " << lora::to_string(targets) << " (" << arch->name
              << ", r=" << plan.rank << "): " << count.count << " ("
              << lora::format_millions(count.count) << ", " << percent
              << " of base)\n";
  }
  return 0;
}

int cmd_report(const std::vector<std::string> &inputs,
               const std::string &out_dir) {
  fs::create_directories(out_dir);
  std::vector<eval::MetricsReport> reports;
  for (const std::string &path : inputs) {
    reports.push_back(eval::load_metrics_report(path));
  }
  eval::MetricsReport merged = eval::aggregate_runs(reports);
  eval::save_metrics_report(merged, out_dir + "/aggregate_report.json");
  eval::write_csv_tables(merged, out_dir, "aggregate");
  write_run_index(out_dir,
                  {{"command", "report"},
                   {"inputs", inputs},
                   {"config_hash", merged.config_hash}},
                  {"aggregate_report.json"});
  std::cout << "aggregated " << reports.size() << " runs\n";
  return 0;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"enzybench: enzymatic-reaction benchmark toolkit"};
  app.require_subcommand(1);

  // ingest
  auto *ingest = app.add_subcommand("ingest", "canonicalize a reaction file");
  std::string in_input, in_out = "out", in_source;
  ingest->add_option("--input", in_input, "reaction file")->required();
  ingest->add_option("--out", in_out, "output directory");
  ingest->add_option("--source", in_source, "CSV source filter, e.g. brenda");

  // split
  auto *split = app.add_subcommand("split", "group and split records");
  std::string sp_records, sp_out = "out";
  std::uint64_t sp_seed = 0;
  double sp_fraction = 0.70;
  std::uint64_t sp_n_per_task = 0;
  split->add_option("--records", sp_records, "records.json from ingest")
      ->required();
  split->add_option("--out", sp_out, "output directory");
  split->add_option("--seed", sp_seed, "shuffle seed");
  split->add_option("--train-fraction", sp_fraction, "train record share");
  split->add_option("--n-per-task", sp_n_per_task,
                    "low-data regime: train records kept per task");

  // gen-prompts
  auto *gen = app.add_subcommand("gen-prompts", "emit chat-format corpora");
  std::string gp_manifest, gp_out = "out/corpus", gp_mode = "st",
              gp_templates;
  std::uint64_t gp_seed = 0;
  gen->add_option("--manifest", gp_manifest, "split_manifest.json")
      ->required();
  gen->add_option("--out", gp_out, "output directory");
  gen->add_option("--mode", gp_mode, "st or mt")
      ->check(CLI::IsMember({"st", "mt"}));
  gen->add_option("--templates", gp_templates, "template pool JSON");
  gen->add_option("--seed", gp_seed, "template selection seed");

  // infer
  auto *infer = app.add_subcommand("infer", "query a chat-completions API");
  std::string if_corpus, if_out = "responses.jsonl";
  client::CompletionParams params;
  infer->add_option("--corpus", if_corpus, "test corpus JSONL")->required();
  infer->add_option("--out", if_out, "response set path");
  infer->add_option("--endpoint", params.endpoint, "API base URL")
      ->required();
  infer->add_option("--model", params.model, "model name");
  infer->add_option("--temperature", params.temperature, "sampling temp");
  infer->add_option("--max-tokens", params.max_tokens, "completion budget");
  infer->add_option("--timeout", params.timeout_seconds, "request timeout s");
  infer->add_option("--max-retries", params.max_retries, "transient retries");
  infer->add_option("--max-in-flight", params.max_in_flight,
                    "parallel request bound");
  infer->add_option("--retry-backoff-ms", params.retry_backoff_ms,
                    "initial backoff, doubled per attempt");
  infer->add_option("--run-index", params.run_index, "N-runs index");

  // evaluate
  auto *evaluate = app.add_subcommand("evaluate", "score stored responses");
  std::string ev_manifest, ev_replay, ev_out = "out/eval", ev_corpus;
  evaluate->add_option("--manifest", ev_manifest, "split_manifest.json")
      ->required();
  evaluate->add_option("--replay", ev_replay, "response set JSONL")
      ->required();
  evaluate->add_option("--out", ev_out, "output directory");
  evaluate->add_option("--corpus", ev_corpus,
                       "test corpus JSONL for coverage checking");

  // baseline
  auto *bl = app.add_subcommand("baseline", "fingerprint + GBDT baseline");
  std::string bl_manifest, bl_out = "out/baseline", bl_task = "all",
              bl_model_out;
  std::uint64_t bl_seed = 0;
  bool bl_ablation = false;
  bl->add_option("--manifest", bl_manifest, "split_manifest.json")
      ->required();
  bl->add_option("--out", bl_out, "output directory");
  bl->add_option("--task", bl_task, "ec, fs, rs or all")
      ->check(CLI::IsMember({"ec", "fs", "rs", "all"}));
  bl->add_option("--seed", bl_seed, "training seed");
  bl->add_flag("--ablation", bl_ablation, "run the EC scale ablation");
  bl->add_option("--save-model", bl_model_out,
                 "persist trained models to this filename suffix");

  // lora-calc
  auto *lc = app.add_subcommand("lora-calc", "LoRA trainable parameters");
  std::string lc_arch = "llama31-8b", lc_setup = "all", lc_presets;
  int lc_rank = 16, lc_alpha = 32;
  lc->add_option("--arch", lc_arch, "architecture preset name");
  lc->add_option("--setup", lc_setup, "light, attention, default or all")
      ->check(CLI::IsMember({"light", "attention", "default", "all"}));
  lc->add_option("--rank", lc_rank, "adapter rank");
  lc->add_option("--alpha", lc_alpha, "adapter alpha (no effect on count)");
  lc->add_option("--presets", lc_presets, "architecture presets JSON");

  // report
  auto *report = app.add_subcommand("report", "aggregate metric reports");
  std::vector<std::string> rp_inputs;
  std::string rp_out = "out/report";
  report->add_option("--inputs", rp_inputs, "metrics_report.json files")
      ->required()
      ->expected(-1);
  report->add_option("--out", rp_out, "output directory");

  // synth-corpus
  auto *synth = app.add_subcommand("synth-corpus",
                                   "generate a synthetic reaction corpus");
  std::string sy_out = "corpus.txt";
  synth::SynthConfig sy_config;
  synth->add_option("--out", sy_out, "corpus file path");
  synth->add_option("--seed", sy_config.seed, "generator seed");
  synth->add_option("--n", sy_config.n_unique, "unique reactions");
  synth->add_option("--signature-prob", sy_config.signature_prob,
                    "share of products carrying the class signature motif");
  synth->add_option("--variants", sy_config.fragment_variants,
                    "subclass motif variants (vocabulary size)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    if (e.get_exit_code() == 0) return 0;  // --help
    std::cerr << e.what() << "\n";
    return 2;
  }

  try {
    if (app.got_subcommand(ingest)) {
      return cmd_ingest(in_input, in_out, in_source);
    }
    if (app.got_subcommand(split)) {
      return cmd_split(sp_records, sp_out, sp_seed, sp_fraction,
                       sp_n_per_task);
    }
    if (app.got_subcommand(gen)) {
      return cmd_gen_prompts(gp_manifest, gp_out, gp_mode, gp_templates,
                             gp_seed);
    }
    if (app.got_subcommand(infer)) {
      return cmd_infer(if_corpus, if_out, params);
    }
    if (app.got_subcommand(evaluate)) {
      return cmd_evaluate(ev_manifest, ev_replay, ev_out, ev_corpus);
    }
    if (app.got_subcommand(bl)) {
      return cmd_baseline(bl_manifest, bl_out, bl_task, bl_ablation, bl_seed,
                          bl_model_out);
    }
    if (app.got_subcommand(lc)) {
      return cmd_lora_calc(lc_arch, lc_setup, lc_rank, lc_alpha, lc_presets);
    }
    if (app.got_subcommand(report)) {
      return cmd_report(rp_inputs, rp_out);
    }
    if (app.got_subcommand(synth)) {
      synth::write_synth_corpus(sy_config, sy_out);
      std::cout << "wrote " << sy_out << "\n";
      return 0;
    }
  } catch (const Error &err) {
    std::cerr << "error: " << err.what() << "\n";
    return 1;
  } catch (const std::exception &err) {
    std::cerr << "error: " << err.what() << "\n";
    return 1;
  }
  return 2;
}
