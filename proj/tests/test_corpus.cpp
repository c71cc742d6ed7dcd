#include <array>
#include <set>
#include <sstream>

#include <doctest.h>

#include "enzybench/corpus/grouping.hpp"
#include "enzybench/corpus/manifest.hpp"
#include "enzybench/corpus/reaction.hpp"
#include "enzybench/corpus/split.hpp"
#include "enzybench/chem/fingerprint.hpp"
#include "enzybench/chem/smiles.hpp"
#include "enzybench/synth/synth.hpp"
#include "enzybench/util/config.hpp"

using namespace enzybench;
using namespace enzybench::corpus;

namespace {

ReactionRecord rec(const std::string &substrates, const std::string &product,
                   const std::string &ec) {
  return make_record(substrates, product, ECNumber::parse(ec));
}

std::vector<ReactionRecord> singleton_records(int n) {
  // chains of distinct length are guaranteed distinct molecules
  std::vector<ReactionRecord> records;
  for (int i = 0; i < n; ++i) {
    std::string substrate = "C";
    for (int k = 0; k < i; ++k) substrate += "C";
    records.push_back(rec(substrate, substrate + "O",
                          std::to_string(1 + i % 6) + ".1.1.1"));
  }
  return records;
}

}  // namespace

TEST_CASE("EC number parsing") {
  ECNumber ec = ECNumber::parse("1.2.3.4");
  CHECK(ec.str() == "1.2.3.4");
  CHECK(ec.truncated(1) == "1");
  CHECK(ec.truncated(2) == "1.2");
  CHECK(ec.truncated(3) == "1.2.3");
  CHECK_THROWS_AS(ECNumber::parse("1.1.1"), FormatError);
  CHECK_THROWS_AS(ECNumber::parse("1.1.1.1.1"), FormatError);
  CHECK_THROWS_AS(ECNumber::parse("8.1.1.1"), FormatError);
  CHECK_THROWS_AS(ECNumber::parse("0.1.1.1"), FormatError);
  CHECK_THROWS_AS(ECNumber::parse("1.x.1.1"), FormatError);
  CHECK_THROWS_AS(ECNumber::parse(""), FormatError);
}

TEST_CASE("make_record canonicalizes and hashes") {
  ReactionRecord a = rec("OCC.C", "CC(=O)O", "1.1.1.1");
  ReactionRecord b = rec("C.CCO", "OC(C)=O", "1.1.1.1");
  CHECK(a.id == b.id);
  CHECK(a.substrates == b.substrates);
  CHECK(a.product == b.product);
  CHECK_FALSE(a.class7);
  CHECK(rec("C", "CC", "7.1.1.1").class7);
  // multi-component products and substrate-duplicating products rejected
  CHECK_THROWS_AS(rec("C", "CC.O", "1.1.1.1"), FormatError);
  CHECK_THROWS_AS(rec("CCO.C", "OCC", "1.1.1.1"), FormatError);
}

TEST_CASE("ingest dedups, reports bad lines, keeps going") {
  std::istringstream input(
      "# comment\n"
      "OCC|1.1.1.1>>CC=O\n"
      "C(O)C|1.1.1.1>>O=CC\n"          // same reaction, other atom order
      "CC|1.1.1>>CCO\n"                 // 3-digit EC
      "C1CC|1.1.1.1>>CCO\n"             // bad SMILES
      "no separators here\n"
      "CCN|2.3.4.5>>CCNC\n"
      "CCS|7.1.1.1>>CCSC\n");
  IngestReport report;
  auto records = ingest_stream(input, report);
  CHECK(records.size() == 3);
  CHECK(report.duplicates_removed == 1);
  CHECK(report.issues.size() == 3);
  CHECK(report.lines_parsed == 3);
  CHECK(records[2].class7);
  // issues carry line numbers
  CHECK(report.issues[0].line == 4);
}

TEST_CASE("ingest reads the ECREACT csv shape") {
  std::istringstream input(
      "rxn_smiles,source\n"
      "OCC|1.1.1.1>>CC=O,brenda\n"
      "CCN|2.3.4.5>>CCNC,rhea\n");
  IngestReport report;
  IngestOptions options;
  options.source_filter = "brenda";
  auto records = ingest_stream(input, report, options);
  CHECK(records.size() == 1);
  CHECK(report.skipped_by_source == 1);
}

TEST_CASE("grouping unions shared keys") {
  // (S1,P1,E), (S1,P2,E) -> one group of 2
  std::vector<ReactionRecord> two = {rec("CCO", "CC=O", "1.1.1.1"),
                                     rec("CCO", "CCC=O", "1.1.1.1")};
  auto groups = group_reactions(two);
  REQUIRE(groups.size() == 1);
  CHECK(groups[0].size() == 2);

  // chained via S2 and P1: (S1,P1,E), (S2,P1,E), (S2,P3,E)
  std::vector<ReactionRecord> chain = {rec("CCO", "CC=O", "1.1.1.1"),
                                       rec("CCN", "CC=O", "1.1.1.1"),
                                       rec("CCN", "CCC=O", "1.1.1.1")};
  groups = group_reactions(chain);
  REQUIRE(groups.size() == 1);
  CHECK(groups[0].size() == 3);

  // same molecules, different EC -> no sharing
  std::vector<ReactionRecord> apart = {rec("CCO", "CC=O", "1.1.1.1"),
                                       rec("CCO", "CC=O", "2.1.1.1")};
  CHECK(group_reactions(apart).size() == 2);

  auto singles = singleton_records(20);
  groups = group_reactions(singles);
  CHECK(groups.size() == 20);
  for (const auto &g : groups) CHECK(g.size() == 1);
}

TEST_CASE("groups are disjoint and cover all records") {
  synth::SynthConfig config;
  config.seed = 5;
  config.n_unique = 400;
  std::istringstream input(synth::synth_corpus_text(config));
  IngestReport report;
  auto records = ingest_stream(input, report);
  auto groups = group_reactions(records);
  std::set<std::size_t> seen;
  std::size_t total = 0;
  for (const auto &g : groups) {
    total += g.size();
    for (std::size_t r : g.members) CHECK(seen.insert(r).second);
  }
  CHECK(total == records.size());
}

TEST_CASE("split balances records 70-30") {
  auto records = singleton_records(100);
  auto groups = group_reactions(records);
  SplitConfig config;
  config.seed = 11;
  auto assignment = split_groups(groups, records, config);
  int train = 0;
  for (std::size_t g = 0; g < groups.size(); ++g) {
    if (assignment.group_split[g] == Split::Train) ++train;
  }
  CHECK(train == 70);
  // validation is a subset of train records, about 10%
  int val = 0;
  for (std::size_t r = 0; r < records.size(); ++r) {
    if (assignment.record_validation[r]) ++val;
  }
  CHECK(val >= 7);
  CHECK(val <= 10);

  auto again = split_groups(groups, records, config);
  CHECK(again.group_split == assignment.group_split);
  CHECK(again.record_validation == assignment.record_validation);

  SplitConfig other = config;
  other.seed = 12;
  CHECK(split_groups(groups, records, other).group_split !=
        assignment.group_split);
}

TEST_CASE("split refuses degenerate input") {
  auto records = singleton_records(5);
  auto groups = group_reactions(records);
  CHECK_THROWS_AS(split_groups(groups, records, SplitConfig{}),
                  DegenerateInput);
}

TEST_CASE("task rotation balances record counts") {
  auto records = singleton_records(9);
  auto groups = group_reactions(records);
  SplitAssignment assignment;
  assignment.seed = 3;
  assignment.group_split.assign(9, Split::Train);
  assignment.group_task.assign(9, Task::EC);
  assignment.group_included.assign(9, true);
  assignment.record_validation.assign(9, false);
  assign_tasks(assignment, groups, records);
  std::array<int, 3> counts{0, 0, 0};
  for (Task t : assignment.group_task) ++counts[static_cast<int>(t)];
  CHECK(counts == std::array<int, 3>{3, 3, 3});

  auto ten = singleton_records(10);
  auto ten_groups = group_reactions(ten);
  SplitAssignment ten_assignment;
  ten_assignment.seed = 3;
  ten_assignment.group_split.assign(10, Split::Train);
  ten_assignment.group_task.assign(10, Task::EC);
  ten_assignment.group_included.assign(10, true);
  ten_assignment.record_validation.assign(10, false);
  assign_tasks(ten_assignment, ten_groups, ten);
  counts = {0, 0, 0};
  for (Task t : ten_assignment.group_task) ++counts[static_cast<int>(t)];
  CHECK(counts == std::array<int, 3>{4, 3, 3});
}

TEST_CASE("per-split task record counts stay within one largest group") {
  synth::SynthConfig config;
  config.seed = 21;
  config.n_unique = 600;
  std::istringstream input(synth::synth_corpus_text(config));
  IngestReport report;
  auto records = ingest_stream(input, report);
  auto groups = group_reactions(records);
  SplitConfig split_config;
  split_config.seed = 9;
  auto assignment = split_groups(groups, records, split_config);
  assign_tasks(assignment, groups, records);
  std::size_t largest = 0;
  for (const auto &g : groups) largest = std::max(largest, g.size());
  for (Split split : {Split::Train, Split::Test}) {
    std::array<std::size_t, 3> counts{0, 0, 0};
    for (std::size_t g = 0; g < groups.size(); ++g) {
      if (assignment.group_split[g] != split) continue;
      counts[static_cast<int>(assignment.group_task[g])] += groups[g].size();
    }
    std::size_t lo = *std::min_element(counts.begin(), counts.end());
    std::size_t hi = *std::max_element(counts.begin(), counts.end());
    CHECK(hi - lo <= largest);
  }
}

TEST_CASE("subsample keeps whole groups near the target") {
  auto records = singleton_records(400);
  auto groups = group_reactions(records);
  SplitConfig config;
  config.seed = 17;
  auto assignment = split_groups(groups, records, config);
  assign_tasks(assignment, groups, records);

  auto small = subsample(assignment, groups, records, 50, 17);
  std::array<std::size_t, 3> counts{0, 0, 0};
  for (std::size_t g = 0; g < groups.size(); ++g) {
    if (small.group_split[g] != Split::Train) continue;
    if (!small.group_included[g]) continue;
    counts[static_cast<int>(small.group_task[g])] += groups[g].size();
  }
  CHECK(counts == std::array<std::size_t, 3>{50, 50, 50});

  // test side untouched
  for (std::size_t g = 0; g < groups.size(); ++g) {
    if (assignment.group_split[g] == Split::Test) {
      CHECK(small.group_included[g]);
    }
  }
  CHECK_THROWS_AS(subsample(assignment, groups, records, 100000, 1),
                  InsufficientData);
}

TEST_CASE("subsample respects group atomicity") {
  // groups of size 7 via substrate branching keys
  std::vector<ReactionRecord> records;
  for (int g = 0; g < 60; ++g) {
    std::string substrate = "C";
    for (int k = 0; k < g; ++k) substrate += "C";
    for (int p = 0; p < 7; ++p) {
      std::string product = substrate + "O";
      for (int k = 0; k < p; ++k) product += "N";
      records.push_back(rec(substrate, product, "1.1.1.1"));
    }
  }
  auto groups = group_reactions(records);
  REQUIRE(groups.size() == 60);
  SplitConfig config;
  config.seed = 2;
  auto assignment = split_groups(groups, records, config);
  assign_tasks(assignment, groups, records);
  auto small = subsample(assignment, groups, records, 50, 2);
  for (Task task : {Task::EC, Task::FS, Task::RS}) {
    std::size_t kept = 0;
    for (std::size_t g = 0; g < groups.size(); ++g) {
      if (small.group_split[g] != Split::Train) continue;
      if (small.group_task[g] != task) continue;
      if (small.group_included[g]) kept += groups[g].size();
    }
    CHECK(kept >= 44);  // closest whole-group total to 50 with size-7 blocks
    CHECK(kept <= 56);
  }
}

TEST_CASE("branching statistics") {
  auto unique = singleton_records(10);
  BranchingStats stats = branching_stats(unique);
  CHECK(stats.substrate_hist.at(1) == 10);
  CHECK(stats.product_hist.at(1) == 10);

  std::vector<ReactionRecord> branched = {rec("CCO", "CC=O", "1.1.1.1"),
                                          rec("CCO", "CCC=O", "1.1.1.1")};
  stats = branching_stats(branched);
  CHECK(stats.substrate_hist.at(2) == 1);
  CHECK(stats.product_hist.at(1) == 2);
}

TEST_CASE("intra-group tanimoto statistics") {
  // substrate-branching key with two alternative products
  std::vector<ReactionRecord> pair = {rec("C", "CCO", "1.1.1.1"),
                                      rec("C", "CCN", "1.1.1.1")};
  auto entries = intra_group_tanimoto(pair);
  REQUIRE(entries.size() == 1);
  CHECK(entries[0].size == 2);
  CHECK_FALSE(entries[0].stddev.has_value());  // size-2: no spread to report
  double expected = chem::tanimoto(
      chem::path_fingerprint(chem::parse_smiles("CCO")),
      chem::path_fingerprint(chem::parse_smiles("CCN")));
  CHECK(entries[0].mean == doctest::Approx(expected));

  // three identical counterpart molecules -> mean 1, stddev 0
  std::vector<ReactionRecord> same = {rec("CC", "CCO", "2.1.1.1"),
                                      rec("CN", "CCO", "2.1.1.1"),
                                      rec("CO", "CCO", "2.1.1.1")};
  // product-branching key: counterparts are the substrate sets; use a
  // shared product so the key has size 3
  auto out = intra_group_tanimoto(same);
  REQUIRE(out.size() == 1);
  CHECK(out[0].product_branching);
  CHECK(out[0].size == 3);
  CHECK(out[0].stddev.has_value());
}

TEST_CASE("manifest round trip") {
  auto records = singleton_records(30);
  auto groups = group_reactions(records);
  SplitConfig config;
  config.seed = 4;
  auto assignment = split_groups(groups, records, config);
  assign_tasks(assignment, groups, records);
  Manifest manifest;
  manifest.records = records;
  manifest.groups = groups;
  manifest.assignment = assignment;
  manifest.config_json = R"({"seed":4})";
  manifest.config_hash = config_hash(manifest.config_json);
  std::string json_text = manifest_to_json(manifest);
  Manifest loaded = manifest_from_json(json_text);
  CHECK(loaded.records.size() == manifest.records.size());
  CHECK(loaded.groups.size() == manifest.groups.size());
  CHECK(loaded.assignment.group_split == manifest.assignment.group_split);
  CHECK(loaded.assignment.group_task == manifest.assignment.group_task);
  CHECK(loaded.assignment.record_validation ==
        manifest.assignment.record_validation);
  CHECK(loaded.config_hash == manifest.config_hash);
  // byte-stable serialization
  CHECK(manifest_to_json(loaded) == json_text);
  CHECK_THROWS_AS(manifest_from_json("{}"), std::exception);
}
