#pragma once

#include <string>
#include <vector>

#include "enzybench/corpus/split.hpp"

namespace enzybench::corpus {

// The split manifest ties records, groups and the assignment together and
// is the sole input of downstream stages.
struct Manifest {
  std::vector<ReactionRecord> records;
  std::vector<ReactionGroup> groups;
  SplitAssignment assignment;
  std::string config_hash;
  std::string config_json;  // resolved configuration echo
};

std::string manifest_to_json(const Manifest &manifest);
Manifest manifest_from_json(const std::string &json_text);

void save_manifest(const Manifest &manifest, const std::string &path);
Manifest load_manifest(const std::string &path);

}  // namespace enzybench::corpus
