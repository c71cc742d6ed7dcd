#include "enzybench/corpus/grouping.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_map>

#include "enzybench/chem/canonical.hpp"
#include "enzybench/chem/fingerprint.hpp"
#include "enzybench/chem/smiles.hpp"

namespace enzybench::corpus {

namespace {

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n) {
    std::iota(parent_.begin(), parent_.end(), 0);
  }

  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    // smaller root wins so group numbering follows input order
    if (b < a) std::swap(a, b);
    parent_[b] = a;
  }

 private:
  std::vector<std::size_t> parent_;
};

std::string substrate_key(const ReactionRecord &r) {
  return r.substrates + "|" + r.ec.str();
}

std::string product_key(const ReactionRecord &r) {
  return r.product + "|" + r.ec.str();
}

}  // namespace

std::vector<ReactionGroup> group_reactions(
    const std::vector<ReactionRecord> &records) {
  UnionFind uf(records.size());
  std::unordered_map<std::string, std::size_t> first_by_key;
  for (std::size_t i = 0; i < records.size(); ++i) {
    for (const std::string &key :
         {substrate_key(records[i]), product_key(records[i])}) {
      auto [it, inserted] = first_by_key.insert({key, i});
      if (!inserted) uf.unite(it->second, i);
    }
  }
  std::unordered_map<std::size_t, std::size_t> group_of_root;
  std::vector<ReactionGroup> groups;
  for (std::size_t i = 0; i < records.size(); ++i) {
    std::size_t root = uf.find(i);
    auto [it, inserted] = group_of_root.insert({root, groups.size()});
    if (inserted) {
      groups.push_back(ReactionGroup{"g" + std::to_string(groups.size()), {}});
    }
    groups[it->second].members.push_back(i);
  }
  return groups;
}

BranchingStats branching_stats(const std::vector<ReactionRecord> &records) {
  std::unordered_map<std::string, std::size_t> substrate_counts;
  std::unordered_map<std::string, std::size_t> product_counts;
  for (const ReactionRecord &r : records) {
    ++substrate_counts[substrate_key(r)];
    ++product_counts[product_key(r)];
  }
  BranchingStats stats;
  for (const auto &[key, n] : substrate_counts) ++stats.substrate_hist[n];
  for (const auto &[key, n] : product_counts) ++stats.product_hist[n];
  return stats;
}

namespace {

BranchingTanimoto key_tanimoto(const std::string &key, bool product_branching,
                               const std::vector<std::string> &counterparts) {
  BranchingTanimoto entry;
  entry.key = key;
  entry.product_branching = product_branching;
  entry.size = counterparts.size();
  chem::BitFingerprint reference =
      chem::path_fingerprint(chem::parse_smiles(counterparts.front()));
  std::vector<double> scores;
  scores.reserve(counterparts.size() - 1);
  for (std::size_t i = 1; i < counterparts.size(); ++i) {
    chem::BitFingerprint other =
        chem::path_fingerprint(chem::parse_smiles(counterparts[i]));
    scores.push_back(chem::tanimoto(reference, other));
  }
  double mean = std::accumulate(scores.begin(), scores.end(), 0.0) /
                static_cast<double>(scores.size());
  entry.mean = mean;
  if (scores.size() >= 2) {
    double ss = 0.0;
    for (double s : scores) ss += (s - mean) * (s - mean);
    entry.stddev = std::sqrt(ss / static_cast<double>(scores.size() - 1));
  }
  return entry;
}

}  // namespace

std::vector<BranchingTanimoto> intra_group_tanimoto(
    const std::vector<ReactionRecord> &records) {
  // Preserve first-seen key order for reproducible reports.
  std::vector<std::pair<std::string, bool>> key_order;
  std::unordered_map<std::string, std::vector<std::string>> counterparts;
  for (const ReactionRecord &r : records) {
    std::string skey = "S:" + substrate_key(r);
    std::string pkey = "P:" + product_key(r);
    if (!counterparts.count(skey)) key_order.push_back({skey, false});
    if (!counterparts.count(pkey)) key_order.push_back({pkey, true});
    // a substrate-branching key collects the alternative products and a
    // product-branching key the alternative substrate sets
    counterparts[skey].push_back(r.product);
    counterparts[pkey].push_back(r.substrates);
  }
  std::vector<BranchingTanimoto> out;
  for (const auto &[key, product_branching] : key_order) {
    const auto &mols = counterparts[key];
    if (mols.size() < 2) continue;
    out.push_back(key_tanimoto(key.substr(2), product_branching, mols));
  }
  return out;
}

}  // namespace enzybench::corpus
