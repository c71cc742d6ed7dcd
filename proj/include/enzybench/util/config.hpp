#pragma once

#include <string>

namespace enzybench {

// Deterministic hash of a resolved-configuration JSON string; embedded in
// every artifact so `report` can refuse to join mismatched runs.
std::string config_hash(const std::string &config_json);

}  // namespace enzybench
