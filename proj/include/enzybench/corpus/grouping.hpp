#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "enzybench/corpus/reaction.hpp"

namespace enzybench::corpus {

// A merged set of reactions connected through shared {substrate-set, EC} or
// {product, EC} keys; the atomic unit of splitting.
struct ReactionGroup {
  std::string id;
  std::vector<std::size_t> members;  // record indices, input order

  std::size_t size() const { return members.size(); }
};

// Union-find over shared keys; groups are disjoint, cover all records, and
// are numbered by their smallest member index.
std::vector<ReactionGroup> group_reactions(
    const std::vector<ReactionRecord> &records);

// Histograms of key multiplicity: how many {substrate-set, EC} keys (and
// {product, EC} keys) are shared by exactly k records.
struct BranchingStats {
  std::map<std::size_t, std::size_t> substrate_hist;
  std::map<std::size_t, std::size_t> product_hist;
};

BranchingStats branching_stats(const std::vector<ReactionRecord> &records);

// Chemical diversity inside one branching key: Tanimoto between the first
// member's counterpart molecule and each of the others.
struct BranchingTanimoto {
  std::string key;
  bool product_branching = false;  // false: substrate-branching key
  std::size_t size = 0;
  double mean = 0.0;
  std::optional<double> stddev;  // absent for size-2 groups
};

std::vector<BranchingTanimoto> intra_group_tanimoto(
    const std::vector<ReactionRecord> &records);

}  // namespace enzybench::corpus
