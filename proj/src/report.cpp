#include "enzybench/eval/report.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

#include <nlohmann/json.hpp>

#include "enzybench/util/error.hpp"

namespace enzybench::eval {

using ordered_json = nlohmann::ordered_json;

namespace {

ordered_json matrix_to_json(const ConfusionMatrix &cm) {
  ordered_json doc;
  doc["truth_labels"] = cm.truth_labels;
  doc["pred_labels"] = cm.pred_labels;
  doc["counts"] = cm.counts;
  return doc;
}

ConfusionMatrix matrix_from_json(const ordered_json &doc) {
  ConfusionMatrix cm;
  cm.truth_labels = doc.at("truth_labels").get<std::vector<std::string>>();
  cm.pred_labels = doc.at("pred_labels").get<std::vector<std::string>>();
  cm.counts = doc.at("counts").get<std::vector<std::vector<double>>>();
  return cm;
}

std::string fixed(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", value);
  return buf;
}

}  // namespace

std::string metrics_report_to_json(const MetricsReport &report) {
  ordered_json doc;
  doc["schema"] = "enzybench.metrics_report/1";
  doc["config_hash"] = report.config_hash;
  doc["run_index"] = report.run_index;
  doc["n_runs"] = report.n_runs;
  ordered_json tasks;
  for (const auto &[key, block] : report.tasks) {
    ordered_json entry;
    entry["scalars"] = block.scalars;
    if (!block.scalar_stddev.empty()) {
      entry["scalar_stddev"] = block.scalar_stddev;
    }
    if (!block.tanimoto_histogram.empty()) {
      entry["tanimoto_histogram"] = block.tanimoto_histogram;
    }
    for (const auto &[name, cm] : block.matrices) {
      entry["confusion"][name] = matrix_to_json(cm);
    }
    tasks[key] = std::move(entry);
  }
  doc["tasks"] = std::move(tasks);
  return doc.dump(2) + "\n";
}

MetricsReport metrics_report_from_json(const std::string &json_text) {
  ordered_json doc = ordered_json::parse(json_text);
  if (doc.value("schema", "") != "enzybench.metrics_report/1") {
    throw SchemaError("not an enzybench metrics report");
  }
  MetricsReport report;
  report.config_hash = doc.value("config_hash", "");
  report.run_index = doc.value("run_index", 1);
  report.n_runs = doc.value("n_runs", 1);
  for (const auto &[key, entry] : doc.at("tasks").items()) {
    TaskBlock block;
    block.scalars =
        entry.at("scalars").get<std::map<std::string, double>>();
    if (entry.contains("scalar_stddev")) {
      block.scalar_stddev =
          entry["scalar_stddev"].get<std::map<std::string, double>>();
    }
    if (entry.contains("tanimoto_histogram")) {
      block.tanimoto_histogram =
          entry["tanimoto_histogram"].get<std::vector<double>>();
    }
    if (entry.contains("confusion")) {
      for (const auto &[name, cm] : entry["confusion"].items()) {
        block.matrices[name] = matrix_from_json(cm);
      }
    }
    report.tasks[key] = std::move(block);
  }
  return report;
}

void save_metrics_report(const MetricsReport &report,
                         const std::string &path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write metrics report: " + path);
  out << metrics_report_to_json(report);
}

MetricsReport load_metrics_report(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read metrics report: " + path);
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  return metrics_report_from_json(text);
}

namespace {

void write_scalar_table(const MetricsReport &report, const std::string &path,
                        const std::vector<std::string> &keys) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write csv: " + path);
  out << "task,metric,value,stddev\n";
  for (const auto &[task, block] : report.tasks) {
    for (const std::string &key : keys) {
      auto it = block.scalars.find(key);
      if (it == block.scalars.end()) continue;
      out << task << "," << key << "," << fixed(it->second) << ",";
      auto sd = block.scalar_stddev.find(key);
      if (sd != block.scalar_stddev.end()) out << fixed(sd->second);
      out << "\n";
    }
  }
}

void write_matrix(const ConfusionMatrix &cm, const std::string &path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write csv: " + path);
  out << "truth\\pred";
  for (const std::string &label : cm.pred_labels) out << "," << label;
  out << "\n";
  for (std::size_t i = 0; i < cm.truth_labels.size(); ++i) {
    out << cm.truth_labels[i];
    for (double v : cm.counts[i]) out << "," << fixed(v);
    out << "\n";
  }
}

}  // namespace

void write_csv_tables(const MetricsReport &report, const std::string &out_dir,
                      const std::string &stem) {
  std::filesystem::create_directories(out_dir);
  const std::string base = out_dir + "/" + stem;
  write_scalar_table(report, base + "_ec_accuracy.csv",
                     {"ec1_macro", "ec2_macro", "ec3_macro", "ec1_micro",
                      "ec2_micro", "ec3_micro", "validity",
                      "ec1_precision_macro", "ec1_recall_macro",
                      "ec1_f1_macro"});
  write_scalar_table(report, base + "_match_metrics.csv",
                     {"match", "match_ts1", "match_ts095",
                      "share_ts085_of_valid_nonmatch", "share_invalid"});
  write_scalar_table(report, base + "_category_shares.csv",
                     {"share_cm", "share_ncm", "share_cv", "share_ncv",
                      "share_invalid"});
  for (const auto &[task, block] : report.tasks) {
    for (const auto &[name, cm] : block.matrices) {
      write_matrix(cm, base + "_confusion_" + task + "_" + name + ".csv");
    }
    if (!block.tanimoto_histogram.empty()) {
      std::ofstream out(base + "_tanimoto_hist_" + task + ".csv",
                        std::ios::binary);
      out << "bin_low,bin_high,count\n";
      for (std::size_t i = 0; i < block.tanimoto_histogram.size(); ++i) {
        out << fixed(0.05 * i) << "," << fixed(0.05 * (i + 1)) << ","
            << fixed(block.tanimoto_histogram[i]) << "\n";
      }
    }
  }
}

}  // namespace enzybench::eval
