#include "enzybench/lora/lora.hpp"

#include <cstdio>
#include <fstream>

#include <nlohmann/json.hpp>

#include "enzybench/util/error.hpp"

namespace enzybench::lora {

TrainableCount count_trainable(const ArchConfig &config,
                               const AdapterPlan &plan) {
  const long long n = config.hidden;
  const long long kv = config.kv_dim;
  const long long ffn = config.ffn_dim;
  const long long r = plan.rank;

  long long per_layer = 0;
  per_layer += r * (n + n);   // q
  per_layer += r * (n + kv);  // k
  if (plan.targets != AdapterTargets::Light) {
    per_layer += r * (n + kv);  // v
    per_layer += r * (n + n);   // o
  }
  if (plan.targets == AdapterTargets::Default) {
    per_layer += r * (n + ffn);  // gate
    per_layer += r * (n + ffn);  // up
    per_layer += r * (ffn + n);  // down
  }
  TrainableCount out;
  out.count = per_layer * config.layers;
  out.percent_of_base =
      config.base_params > 0
          ? 100.0 * static_cast<double>(out.count) /
                static_cast<double>(config.base_params)
          : 0.0;
  return out;
}

std::string format_millions(long long count) {
  double millions = static_cast<double>(count) / 1e6;
  char buf[32];
  if (millions < 100.0) {
    std::snprintf(buf, sizeof buf, "%.1fM", millions);
  } else {
    std::snprintf(buf, sizeof buf, "%.0fM", millions);
  }
  return buf;
}

AdapterTargets targets_from_string(const std::string &text) {
  if (text == "light") return AdapterTargets::Light;
  if (text == "attention") return AdapterTargets::Attention;
  if (text == "default") return AdapterTargets::Default;
  throw FormatError("unknown LoRA setup '" + text +
                    "' (expected light|attention|default)");
}

std::string to_string(AdapterTargets targets) {
  switch (targets) {
    case AdapterTargets::Light: return "light";
    case AdapterTargets::Attention: return "attention";
    case AdapterTargets::Default: return "default";
  }
  return "default";
}

std::vector<ArchConfig> builtin_presets() {
  return {
      {"llama31-8b", 4096, 32, 1024, 14336, 8030261248LL},
      {"llama31-70b", 8192, 80, 1024, 28672, 70553706496LL},
  };
}

std::vector<ArchConfig> load_presets(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open architecture presets: " + path);
  nlohmann::json doc = nlohmann::json::parse(in);
  std::vector<ArchConfig> presets;
  for (const auto &entry : doc.at("architectures")) {
    ArchConfig config;
    config.name = entry.at("name").get<std::string>();
    config.hidden = entry.at("hidden").get<long long>();
    config.layers = entry.at("layers").get<long long>();
    config.kv_dim = entry.at("kv_dim").get<long long>();
    config.ffn_dim = entry.at("ffn_dim").get<long long>();
    config.base_params = entry.at("base_params").get<long long>();
    presets.push_back(std::move(config));
  }
  return presets;
}

}  // namespace enzybench::lora
