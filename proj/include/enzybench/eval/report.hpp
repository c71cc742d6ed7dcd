#pragma once

#include <string>
#include <vector>

#include "enzybench/eval/metrics.hpp"

namespace enzybench::eval {

std::string metrics_report_to_json(const MetricsReport &report);
MetricsReport metrics_report_from_json(const std::string &json_text);

void save_metrics_report(const MetricsReport &report, const std::string &path);
MetricsReport load_metrics_report(const std::string &path);

// Flat CSV tables shaped like the paper's: EC accuracy depths
// (ec_accuracy.csv), match metrics (match_metrics.csv), category shares
// (category_shares.csv), confusion matrices and Tanimoto histograms.
void write_csv_tables(const MetricsReport &report, const std::string &out_dir,
                      const std::string &stem);

}  // namespace enzybench::eval
