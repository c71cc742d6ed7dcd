#include "enzybench/baseline/gbdt.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "enzybench/util/error.hpp"
#include "enzybench/util/rng.hpp"

namespace enzybench::baseline {

float RegressionTree::predict(const float *row) const {
  int node = 0;
  while (nodes[node].feature >= 0) {
    node = row[nodes[node].feature] <= nodes[node].threshold
               ? nodes[node].left
               : nodes[node].right;
  }
  return nodes[node].value;
}

double EnsembleModel::predict_raw(const float *row) const {
  double score = base_score;
  for (const RegressionTree &tree : trees) score += tree.predict(row);
  return score;
}

std::vector<double> GBDTModel::predict(const float *row) const {
  std::vector<double> out;
  out.reserve(outputs.size());
  for (const EnsembleModel &ensemble : outputs) {
    double raw = ensemble.predict_raw(row);
    if (loss == Loss::Logistic) raw = 1.0 / (1.0 + std::exp(-raw));
    out.push_back(raw);
  }
  return out;
}

namespace {

constexpr double kMinGain = 1e-12;

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

double clipped_log_odds(double p) {
  p = std::clamp(p, 1e-6, 1.0 - 1e-6);
  return std::log(p / (1.0 - p));
}

// Exact distinct-value bins, computed once and shared by every output
// ensemble and every boosting round.
struct BinnedData {
  int n = 0;
  int d = 0;
  std::vector<std::vector<float>> values;        // per feature, sorted
  std::vector<std::vector<std::uint16_t>> bins;  // per feature, per row

  static BinnedData build(const FeatureMatrix &X) {
    BinnedData data;
    data.n = static_cast<int>(X.rows());
    data.d = static_cast<int>(X.cols());
    data.values.resize(data.d);
    data.bins.resize(data.d);
    std::vector<float> column(data.n);
    for (int f = 0; f < data.d; ++f) {
      for (int r = 0; r < data.n; ++r) column[r] = X(r, f);
      std::vector<float> sorted = column;
      std::sort(sorted.begin(), sorted.end());
      sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
      if (sorted.size() > 65535) {
        throw Error("feature has too many distinct values for exact splits");
      }
      data.values[f] = sorted;
      auto &idx = data.bins[f];
      idx.resize(data.n);
      for (int r = 0; r < data.n; ++r) {
        idx[r] = static_cast<std::uint16_t>(
            std::lower_bound(sorted.begin(), sorted.end(), column[r]) -
            sorted.begin());
      }
    }
    return data;
  }
};

struct SplitChoice {
  int feature = -1;
  int bin = -1;  // rows with bin index <= bin go left
  double gain = 0.0;
};

// One boosting tree grown breadth-first on gradient/hessian statistics.
// Leaf values carry the learning rate already.
RegressionTree fit_tree(const BinnedData &data, const std::vector<double> &g,
                        const std::vector<double> &h,
                        const std::vector<int> &train_rows,
                        const std::vector<int> &routed_rows,
                        std::vector<int> &node_of, const GBDTConfig &cfg) {
  RegressionTree tree;
  tree.nodes.push_back(TreeNode{});
  std::vector<int> split_bin{-1};
  for (int r : routed_rows) node_of[r] = 0;

  auto finalize_leaves = [&](const std::vector<int> &frontier) {
    std::vector<int> slot(tree.nodes.size(), -1);
    for (std::size_t i = 0; i < frontier.size(); ++i) {
      slot[frontier[i]] = static_cast<int>(i);
    }
    std::vector<double> node_g(frontier.size(), 0.0);
    std::vector<double> node_h(frontier.size(), 0.0);
    for (int r : train_rows) {
      int s = slot[node_of[r]];
      if (s < 0) continue;
      node_g[s] += g[r];
      node_h[s] += h[r];
    }
    for (std::size_t s = 0; s < frontier.size(); ++s) {
      tree.nodes[frontier[s]].feature = -1;
      tree.nodes[frontier[s]].value = static_cast<float>(
          cfg.learning_rate * node_g[s] / (node_h[s] + cfg.lambda));
    }
  };

  std::vector<int> frontier{0};
  for (int depth = 0; depth < cfg.max_depth && !frontier.empty(); ++depth) {
    std::vector<int> slot(tree.nodes.size(), -1);
    for (std::size_t i = 0; i < frontier.size(); ++i) {
      slot[frontier[i]] = static_cast<int>(i);
    }
    std::vector<double> node_g(frontier.size(), 0.0);
    std::vector<double> node_h(frontier.size(), 0.0);
    std::vector<int> node_c(frontier.size(), 0);
    for (int r : train_rows) {
      int s = slot[node_of[r]];
      if (s < 0) continue;
      node_g[s] += g[r];
      node_h[s] += h[r];
      ++node_c[s];
    }
    std::vector<SplitChoice> best(frontier.size());

    std::vector<double> acc_g;
    std::vector<double> acc_h;
    std::vector<int> acc_c;
    for (int f = 0; f < data.d; ++f) {
      const std::size_t n_bins = data.values[f].size();
      if (n_bins < 2) continue;
      acc_g.assign(frontier.size() * n_bins, 0.0);
      acc_h.assign(frontier.size() * n_bins, 0.0);
      acc_c.assign(frontier.size() * n_bins, 0);
      const auto &bins = data.bins[f];
      for (int r : train_rows) {
        int s = slot[node_of[r]];
        if (s < 0) continue;
        std::size_t cell = static_cast<std::size_t>(s) * n_bins + bins[r];
        acc_g[cell] += g[r];
        acc_h[cell] += h[r];
        ++acc_c[cell];
      }
      for (std::size_t s = 0; s < frontier.size(); ++s) {
        if (node_c[s] < 2) continue;
        double left_g = 0.0;
        double left_h = 0.0;
        int left_c = 0;
        const double parent =
            node_g[s] * node_g[s] / (node_h[s] + cfg.lambda);
        for (std::size_t b = 0; b + 1 < n_bins; ++b) {
          std::size_t cell = s * n_bins + b;
          left_g += acc_g[cell];
          left_h += acc_h[cell];
          left_c += acc_c[cell];
          if (left_c == 0 || left_c == node_c[s]) continue;
          double right_g = node_g[s] - left_g;
          double right_h = node_h[s] - left_h;
          double gain = left_g * left_g / (left_h + cfg.lambda) +
                        right_g * right_g / (right_h + cfg.lambda) - parent;
          if (gain > best[s].gain + kMinGain) {
            best[s].gain = gain;
            best[s].feature = f;
            best[s].bin = static_cast<int>(b);
          }
        }
      }
    }

    std::vector<int> next_frontier;
    std::vector<int> leaf_nodes;
    for (std::size_t s = 0; s < frontier.size(); ++s) {
      int node = frontier[s];
      if (best[s].feature < 0) {
        leaf_nodes.push_back(node);
        continue;
      }
      const int f = best[s].feature;
      tree.nodes[node].feature = f;
      tree.nodes[node].threshold =
          (data.values[f][best[s].bin] + data.values[f][best[s].bin + 1]) /
          2.0f;
      tree.nodes[node].left = static_cast<int>(tree.nodes.size());
      tree.nodes.push_back(TreeNode{});
      split_bin.push_back(-1);
      tree.nodes[node].right = static_cast<int>(tree.nodes.size());
      tree.nodes.push_back(TreeNode{});
      split_bin.push_back(-1);
      split_bin[node] = best[s].bin;
      next_frontier.push_back(tree.nodes[node].left);
      next_frontier.push_back(tree.nodes[node].right);
    }
    if (!leaf_nodes.empty()) finalize_leaves(leaf_nodes);
    for (int r : routed_rows) {
      int node = node_of[r];
      if (tree.nodes[node].feature < 0) continue;
      node_of[r] = data.bins[tree.nodes[node].feature][r] <= split_bin[node]
                       ? tree.nodes[node].left
                       : tree.nodes[node].right;
    }
    frontier = std::move(next_frontier);
  }
  if (!frontier.empty()) finalize_leaves(frontier);
  return tree;
}

double slice_loss(Loss loss, const std::vector<double> &F,
                  const std::vector<float> &y, const std::vector<int> &rows) {
  if (rows.empty()) return 0.0;
  double total = 0.0;
  for (int r : rows) {
    if (loss == Loss::Squared) {
      double d = y[r] - F[r];
      total += d * d;
    } else {
      double p = std::clamp(sigmoid(F[r]), 1e-12, 1.0 - 1e-12);
      total += y[r] > 0.5f ? -std::log(p) : -std::log(1.0 - p);
    }
  }
  return total / static_cast<double>(rows.size());
}

EnsembleModel train_single(const BinnedData &data, const std::vector<float> &y,
                           Loss loss, const std::vector<int> &train_rows,
                           const std::vector<int> &val_rows,
                           const std::vector<int> &all_rows,
                           const GBDTConfig &cfg) {
  EnsembleModel model;
  float lo = y[train_rows.front()];
  float hi = lo;
  double sum = 0.0;
  for (int r : train_rows) {
    lo = std::min(lo, y[r]);
    hi = std::max(hi, y[r]);
    sum += y[r];
  }
  const double mean = sum / static_cast<double>(train_rows.size());
  model.base_score = loss == Loss::Squared
                         ? static_cast<float>(mean)
                         : static_cast<float>(clipped_log_odds(mean));
  if (lo == hi) {
    // degenerate target: constant predictor, no boosting
    model.rounds_used = 0;
    return model;
  }

  std::vector<double> F(y.size(), model.base_score);
  std::vector<double> g(y.size(), 0.0);
  std::vector<double> h(y.size(), 1.0);
  std::vector<int> node_of(y.size(), 0);

  double best_val = std::numeric_limits<double>::infinity();
  int best_round = 0;
  for (int round = 1; round <= cfg.rounds; ++round) {
    for (int r : train_rows) {
      if (loss == Loss::Squared) {
        g[r] = y[r] - F[r];
        h[r] = 1.0;
      } else {
        double p = sigmoid(F[r]);
        g[r] = y[r] - p;
        h[r] = std::max(p * (1.0 - p), 1e-12);
      }
    }
    RegressionTree tree =
        fit_tree(data, g, h, train_rows, all_rows, node_of, cfg);
    for (int r : all_rows) F[r] += tree.nodes[node_of[r]].value;
    model.trees.push_back(std::move(tree));
    model.train_loss.push_back(slice_loss(loss, F, y, train_rows));

    if (!val_rows.empty()) {
      double val = slice_loss(loss, F, y, val_rows);
      if (val < best_val) {
        best_val = val;
        best_round = round;
      } else if (round - best_round >= cfg.patience) {
        model.early_stop_round = best_round;
        break;
      }
    }
  }
  if (model.early_stop_round) {
    model.trees.resize(*model.early_stop_round);
    model.train_loss.resize(*model.early_stop_round);
  }
  model.rounds_used = static_cast<int>(model.trees.size());
  return model;
}

}  // namespace

GBDTModel train_gbdt(const FeatureMatrix &X, const TargetMatrix &Y, Loss loss,
                     const GBDTConfig &config) {
  if (X.rows() != Y.rows() || X.rows() < 2) {
    throw DegenerateInput("need at least 2 aligned samples to train");
  }
  GBDTModel model;
  model.loss = loss;
  model.config = config;
  model.outputs.resize(Y.cols());

  BinnedData data = BinnedData::build(X);

  // one seeded validation slice shared by all outputs
  std::vector<int> order(data.n);
  for (int i = 0; i < data.n; ++i) order[i] = i;
  Rng rng(config.seed ^ 0x76616c69ULL);
  rng.shuffle(order);
  std::size_t n_val = static_cast<std::size_t>(
      config.validation_fraction * static_cast<double>(data.n));
  if (data.n - static_cast<int>(n_val) < 2) n_val = 0;
  std::vector<int> val_rows(order.begin(), order.begin() + n_val);
  std::vector<int> train_rows(order.begin() + n_val, order.end());
  std::sort(val_rows.begin(), val_rows.end());
  std::sort(train_rows.begin(), train_rows.end());
  std::vector<int> all_rows(data.n);
  for (int i = 0; i < data.n; ++i) all_rows[i] = i;

  std::atomic<int> cursor{0};
  auto worker = [&]() {
    std::vector<float> y(data.n);
    for (;;) {
      int k = cursor.fetch_add(1);
      if (k >= Y.cols()) return;
      for (int r = 0; r < data.n; ++r) y[r] = Y(r, k);
      model.outputs[k] =
          train_single(data, y, loss, train_rows, val_rows, all_rows, config);
    }
  };
  int n_threads = config.threads > 0
                      ? config.threads
                      : static_cast<int>(std::thread::hardware_concurrency());
  n_threads = std::max(1, std::min<int>(n_threads, Y.cols()));
  std::vector<std::thread> pool;
  for (int i = 0; i < n_threads; ++i) pool.emplace_back(worker);
  for (std::thread &t : pool) t.join();
  return model;
}

namespace {

using ordered_json = nlohmann::ordered_json;

}  // namespace

std::string gbdt_to_json(const GBDTModel &model) {
  ordered_json doc;
  doc["schema"] = "enzybench.gbdt/1";
  doc["loss"] = model.loss == Loss::Squared ? "squared" : "logistic";
  doc["learning_rate"] = model.config.learning_rate;
  doc["max_depth"] = model.config.max_depth;
  doc["lambda"] = model.config.lambda;
  ordered_json outputs = ordered_json::array();
  for (const EnsembleModel &ensemble : model.outputs) {
    ordered_json entry;
    entry["base_score"] = ensemble.base_score;
    entry["rounds_used"] = ensemble.rounds_used;
    if (ensemble.early_stop_round) {
      entry["early_stop_round"] = *ensemble.early_stop_round;
    }
    ordered_json trees = ordered_json::array();
    for (const RegressionTree &tree : ensemble.trees) {
      ordered_json nodes = ordered_json::array();
      for (const TreeNode &node : tree.nodes) {
        nodes.push_back({{"feature", node.feature},
                         {"threshold", node.threshold},
                         {"left", node.left},
                         {"right", node.right},
                         {"value", node.value}});
      }
      trees.push_back(std::move(nodes));
    }
    entry["trees"] = std::move(trees);
    outputs.push_back(std::move(entry));
  }
  doc["outputs"] = std::move(outputs);
  return doc.dump();
}

GBDTModel gbdt_from_json(const std::string &json_text) {
  ordered_json doc = ordered_json::parse(json_text);
  if (doc.value("schema", "") != "enzybench.gbdt/1") {
    throw SchemaError("not an enzybench gbdt model");
  }
  GBDTModel model;
  model.loss =
      doc.value("loss", "squared") == "logistic" ? Loss::Logistic
                                                 : Loss::Squared;
  model.config.learning_rate = doc.value("learning_rate", 0.3);
  model.config.max_depth = doc.value("max_depth", 6);
  model.config.lambda = doc.value("lambda", 1.0);
  for (const auto &entry : doc.at("outputs")) {
    EnsembleModel ensemble;
    ensemble.base_score = entry.at("base_score").get<float>();
    ensemble.rounds_used = entry.value("rounds_used", 0);
    if (entry.contains("early_stop_round")) {
      ensemble.early_stop_round = entry["early_stop_round"].get<int>();
    }
    for (const auto &tree_json : entry.at("trees")) {
      RegressionTree tree;
      for (const auto &node_json : tree_json) {
        TreeNode node;
        node.feature = node_json.at("feature").get<int>();
        node.threshold = node_json.at("threshold").get<float>();
        node.left = node_json.at("left").get<int>();
        node.right = node_json.at("right").get<int>();
        node.value = node_json.at("value").get<float>();
        tree.nodes.push_back(node);
      }
      ensemble.trees.push_back(std::move(tree));
    }
    model.outputs.push_back(std::move(ensemble));
  }
  return model;
}

void save_gbdt(const GBDTModel &model, const std::string &path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write model: " + path);
  out << gbdt_to_json(model) << "\n";
}

GBDTModel load_gbdt(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read model: " + path);
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  return gbdt_from_json(text);
}

}  // namespace enzybench::baseline
