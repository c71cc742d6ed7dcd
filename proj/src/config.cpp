#include "enzybench/util/config.hpp"

#include <cstdio>

#include <nlohmann/json.hpp>

#include "enzybench/util/hash.hpp"

namespace enzybench {

std::string hex64(std::uint64_t value) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(value));
  return std::string(buf);
}

std::string config_hash(const std::string &config_json) {
  // parse + dump normalizes key order and whitespace
  nlohmann::json parsed = nlohmann::json::parse(config_json);
  return hex64(fnv1a(parsed.dump()));
}

}  // namespace enzybench
