#include <cmath>
#include <filesystem>
#include <fstream>

#include <doctest.h>

#include "enzybench/lora/lora.hpp"
#include "enzybench/util/error.hpp"

using namespace enzybench::lora;

namespace {

const ArchConfig &preset(const std::string &name) {
  static std::vector<ArchConfig> presets = builtin_presets();
  for (const ArchConfig &config : presets) {
    if (config.name == name) return config;
  }
  throw std::runtime_error("missing preset " + name);
}

TrainableCount count_for(const std::string &arch, AdapterTargets targets,
                         int rank = 16) {
  AdapterPlan plan;
  plan.rank = rank;
  plan.targets = targets;
  return count_trainable(preset(arch), plan);
}

}  // namespace

TEST_CASE("the six published trainable-parameter counts are exact") {
  CHECK(count_for("llama31-8b", AdapterTargets::Light).count == 6815744LL);
  CHECK(count_for("llama31-8b", AdapterTargets::Attention).count ==
        13631488LL);
  CHECK(count_for("llama31-8b", AdapterTargets::Default).count ==
        41943040LL);
  CHECK(count_for("llama31-70b", AdapterTargets::Light).count ==
        32768000LL);
  CHECK(count_for("llama31-70b", AdapterTargets::Attention).count ==
        65536000LL);
  CHECK(count_for("llama31-70b", AdapterTargets::Default).count ==
        207093760LL);
}

TEST_CASE("rounded display matches the published bullets") {
  CHECK(format_millions(6815744LL) == "6.8M");
  CHECK(format_millions(13631488LL) == "13.6M");
  CHECK(format_millions(41943040LL) == "41.9M");
  CHECK(format_millions(32768000LL) == "32.8M");
  CHECK(format_millions(65536000LL) == "65.5M");
  CHECK(format_millions(207093760LL) == "207M");
}

TEST_CASE("percentages stay within 0.02pp of the published values") {
  auto near = [](double value, double target) {
    return std::abs(value - target) <= 0.02;
  };
  CHECK(near(count_for("llama31-8b", AdapterTargets::Light).percent_of_base,
             0.09));
  CHECK(near(
      count_for("llama31-8b", AdapterTargets::Attention).percent_of_base,
      0.17));
  CHECK(near(count_for("llama31-8b", AdapterTargets::Default).percent_of_base,
             0.52));
  CHECK(near(count_for("llama31-70b", AdapterTargets::Light).percent_of_base,
             0.05));
  CHECK(near(
      count_for("llama31-70b", AdapterTargets::Attention).percent_of_base,
      0.09));
  CHECK(near(
      count_for("llama31-70b", AdapterTargets::Default).percent_of_base,
      0.29));
}

TEST_CASE("count is linear in rank and zero at rank zero") {
  for (const char *arch : {"llama31-8b", "llama31-70b"}) {
    for (AdapterTargets targets :
         {AdapterTargets::Light, AdapterTargets::Attention,
          AdapterTargets::Default}) {
      long long unit = count_for(arch, targets, 1).count;
      for (int rank : {2, 7, 16, 64}) {
        CHECK(count_for(arch, targets, rank).count == rank * unit);
      }
      CHECK(count_for(arch, targets, 0).count == 0);
    }
  }
}

TEST_CASE("wider target sets strictly increase the count") {
  for (const char *arch : {"llama31-8b", "llama31-70b"}) {
    long long light = count_for(arch, AdapterTargets::Light).count;
    long long attention = count_for(arch, AdapterTargets::Attention).count;
    long long full = count_for(arch, AdapterTargets::Default).count;
    CHECK(light < attention);
    CHECK(attention < full);
  }
}

TEST_CASE("alpha never changes the count") {
  AdapterPlan a;
  a.alpha = 1;
  AdapterPlan b;
  b.alpha = 512;
  CHECK(count_trainable(preset("llama31-8b"), a).count ==
        count_trainable(preset("llama31-8b"), b).count);
}

TEST_CASE("presets load from a json asset") {
  namespace fs = std::filesystem;
  fs::path file = fs::temp_directory_path() / "enzybench_arch.json";
  {
    std::ofstream out(file);
    out << R"({"architectures": [{"name": "tiny", "hidden": 8,
           "layers": 2, "kv_dim": 4, "ffn_dim": 16, "base_params": 1000}]})";
  }
  auto presets = load_presets(file.string());
  REQUIRE(presets.size() == 1);
  AdapterPlan plan;
  plan.rank = 1;
  plan.targets = AdapterTargets::Light;
  // q: 8+8, k: 8+4 per layer, twice
  CHECK(count_trainable(presets[0], plan).count == 2 * (16 + 12));
}

TEST_CASE("unknown setup names are rejected") {
  CHECK_THROWS_AS(targets_from_string("qkv"), enzybench::FormatError);
  CHECK(to_string(targets_from_string("light")) == "light");
  CHECK(to_string(targets_from_string("attention")) == "attention");
  CHECK(to_string(targets_from_string("default")) == "default");
}
