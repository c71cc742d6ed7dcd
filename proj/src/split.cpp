#include "enzybench/corpus/split.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>

#include "enzybench/util/rng.hpp"

namespace enzybench::corpus {

std::string to_string(Split split) {
  return split == Split::Train ? "train" : "test";
}

std::string to_string(Task task) {
  switch (task) {
    case Task::EC: return "ec";
    case Task::FS: return "fs";
    case Task::RS: return "rs";
  }
  return "ec";
}

Split split_from_string(const std::string &text) {
  if (text == "train") return Split::Train;
  if (text == "test") return Split::Test;
  throw FormatError("unknown split '" + text + "'");
}

Task task_from_string(const std::string &text) {
  if (text == "ec") return Task::EC;
  if (text == "fs") return Task::FS;
  if (text == "rs") return Task::RS;
  throw FormatError("unknown task '" + text + "'");
}

SplitAssignment split_groups(const std::vector<ReactionGroup> &groups,
                             const std::vector<ReactionRecord> &records,
                             const SplitConfig &config) {
  if (records.size() < 10) {
    throw DegenerateInput("need at least 10 records to split");
  }
  SplitAssignment assignment;
  assignment.seed = config.seed;
  assignment.group_split.assign(groups.size(), Split::Test);
  assignment.group_task.assign(groups.size(), Task::EC);
  assignment.group_included.assign(groups.size(), true);
  assignment.record_validation.assign(records.size(), false);

  std::vector<std::size_t> order(groups.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  Rng rng(config.seed);
  rng.shuffle(order);

  // bucket by group size, largest first; shuffled order within buckets
  std::map<std::size_t, std::vector<std::size_t>, std::greater<>> buckets;
  for (std::size_t g : order) buckets[groups[g].size()].push_back(g);

  for (auto &[size, bucket] : buckets) {
    std::size_t train_records = 0;
    std::size_t total_records = 0;
    for (std::size_t g : bucket) {
      double train_share =
          total_records == 0
              ? 0.0
              : static_cast<double>(train_records) / total_records;
      double train_deficit = config.train_fraction - train_share;
      double test_deficit = (1.0 - config.train_fraction) -
                            (total_records == 0 ? 0.0 : 1.0 - train_share);
      bool to_train = train_deficit >= test_deficit;
      assignment.group_split[g] = to_train ? Split::Train : Split::Test;
      total_records += groups[g].size();
      if (to_train) train_records += groups[g].size();
    }
  }

  // validation: whole train groups, in shuffled order, until 10% of train
  std::size_t train_total = 0;
  for (std::size_t g = 0; g < groups.size(); ++g) {
    if (assignment.group_split[g] == Split::Train) {
      train_total += groups[g].size();
    }
  }
  const double target =
      config.validation_fraction * static_cast<double>(train_total);
  std::size_t val_records = 0;
  for (std::size_t g : order) {
    if (assignment.group_split[g] != Split::Train) continue;
    if (static_cast<double>(val_records) >= target) break;
    for (std::size_t r : groups[g].members) {
      assignment.record_validation[r] = true;
    }
    val_records += groups[g].size();
  }
  return assignment;
}

void assign_tasks(SplitAssignment &assignment,
                  const std::vector<ReactionGroup> &groups,
                  const std::vector<ReactionRecord> &records) {
  (void)records;
  std::vector<std::size_t> order(groups.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  Rng rng(assignment.seed ^ 0x7461736b7331ULL);  // distinct stream from split
  rng.shuffle(order);

  for (Split split : {Split::Train, Split::Test}) {
    std::array<std::size_t, 3> task_records{0, 0, 0};
    for (std::size_t g : order) {
      if (assignment.group_split[g] != split) continue;
      // rotating assignment: the least-loaded task takes the next group,
      // ties resolved EC -> FS -> RS
      std::size_t best = 0;
      for (std::size_t t = 1; t < 3; ++t) {
        if (task_records[t] < task_records[best]) best = t;
      }
      assignment.group_task[g] = static_cast<Task>(best);
      task_records[best] += groups[g].size();
    }
  }
}

SplitAssignment subsample(const SplitAssignment &assignment,
                          const std::vector<ReactionGroup> &groups,
                          const std::vector<ReactionRecord> &records,
                          std::size_t n_per_task, std::uint64_t seed) {
  (void)records;
  SplitAssignment out = assignment;
  for (Task task : {Task::EC, Task::FS, Task::RS}) {
    std::vector<std::size_t> candidates;
    std::size_t available = 0;
    for (std::size_t g = 0; g < groups.size(); ++g) {
      if (assignment.group_split[g] != Split::Train) continue;
      if (assignment.group_task[g] != task) continue;
      if (!assignment.group_included[g]) continue;
      candidates.push_back(g);
      available += groups[g].size();
    }
    if (available < n_per_task) {
      throw InsufficientData("task " + to_string(task) + " has only " +
                             std::to_string(available) + " train records");
    }
    Rng rng(seed ^ (0x737562ULL + static_cast<std::uint64_t>(task)));
    rng.shuffle(candidates);
    std::size_t kept = 0;
    std::size_t cut = 0;
    while (cut < candidates.size() && kept < n_per_task) {
      kept += groups[candidates[cut]].size();
      ++cut;
    }
    // whole-group atomicity: drop the straddling group when that lands
    // closer to the target
    if (cut > 0 && kept > n_per_task) {
      std::size_t last = groups[candidates[cut - 1]].size();
      if (kept - n_per_task > n_per_task - (kept - last)) {
        --cut;
      }
    }
    for (std::size_t i = cut; i < candidates.size(); ++i) {
      out.group_included[candidates[i]] = false;
      for (std::size_t r : groups[candidates[i]].members) {
        out.record_validation[r] = false;
      }
    }
  }
  return out;
}

}  // namespace enzybench::corpus
