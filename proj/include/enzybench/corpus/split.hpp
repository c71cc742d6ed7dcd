#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "enzybench/corpus/grouping.hpp"

namespace enzybench::corpus {

enum class Split : std::uint8_t { Train, Test };
enum class Task : std::uint8_t { EC, FS, RS };

std::string to_string(Split split);
std::string to_string(Task task);
Split split_from_string(const std::string &text);
Task task_from_string(const std::string &text);

struct SplitConfig {
  double train_fraction = 0.70;
  double validation_fraction = 0.10;  // of train records, by whole groups
  std::uint64_t seed = 0;
};

// Group-level split/task assignment plus the validation subset; indices
// parallel the group and record vectors they were built from.
struct SplitAssignment {
  std::vector<Split> group_split;
  std::vector<Task> group_task;
  std::vector<bool> group_included;     // false after subsampling drops it
  std::vector<bool> record_validation;  // subset of train
  std::uint64_t seed = 0;
};

// Greedy size-bucketed 70-30 balancing: groups shuffled by seed, buckets
// processed largest size first, each group sent to the split furthest
// below its target record share within the bucket. Throws DegenerateInput
// when fewer than 10 records exist.
SplitAssignment split_groups(const std::vector<ReactionGroup> &groups,
                             const std::vector<ReactionRecord> &records,
                             const SplitConfig &config);

// Rotating task assignment within train and test independently: shuffled
// visit order, each group lands on the task with the fewest records so
// far, which keeps per-task record counts within one largest-group of
// each other.
void assign_tasks(SplitAssignment &assignment,
                  const std::vector<ReactionGroup> &groups,
                  const std::vector<ReactionRecord> &records);

// Low-data regime: keeps whole train groups per task until the record
// count is as close to n_per_task as group atomicity allows; test groups
// untouched. Throws InsufficientData when a task has fewer train records
// than requested.
SplitAssignment subsample(const SplitAssignment &assignment,
                          const std::vector<ReactionGroup> &groups,
                          const std::vector<ReactionRecord> &records,
                          std::size_t n_per_task, std::uint64_t seed);

}  // namespace enzybench::corpus
