#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace enzybench::lora {

// Transformer dimensions needed to count low-rank adapter parameters; the
// base parameter count feeds the percentage denominator.
struct ArchConfig {
  std::string name;
  long long hidden = 0;       // n
  long long layers = 0;
  long long kv_dim = 0;       // k/v projection output width
  long long ffn_dim = 0;      // feed-forward intermediate width
  long long base_params = 0;  // full model parameter count
};

enum class AdapterTargets {
  Light,      // [q, k]
  Attention,  // [q, k, v, o]
  Default,    // attention + [gate, up, down]
};

struct AdapterPlan {
  int rank = 16;
  int alpha = 32;  // scales the update, never the parameter count
  AdapterTargets targets = AdapterTargets::Default;
};

struct TrainableCount {
  long long count = 0;
  double percent_of_base = 0.0;
};

// Every adapted matrix of shape n_in x n_out contributes
// rank * (n_in + n_out), summed over targets and layers.
TrainableCount count_trainable(const ArchConfig &config,
                               const AdapterPlan &plan);

// "6.8M" style rounding: one decimal below 100M, whole numbers above.
std::string format_millions(long long count);

AdapterTargets targets_from_string(const std::string &text);
std::string to_string(AdapterTargets targets);

std::vector<ArchConfig> builtin_presets();  // llama31-8b, llama31-70b
std::vector<ArchConfig> load_presets(const std::string &path);

}  // namespace enzybench::lora
