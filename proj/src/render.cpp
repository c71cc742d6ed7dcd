#include "enzybench/prompt/render.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "enzybench/util/hash.hpp"
#include "enzybench/util/rng.hpp"

namespace enzybench::prompt {

using corpus::Task;
using ordered_json = nlohmann::ordered_json;

namespace {

std::string substitute(std::string text, const std::string &placeholder,
                       const std::string &value) {
  std::size_t pos = 0;
  while ((pos = text.find(placeholder, pos)) != std::string::npos) {
    text.replace(pos, placeholder.size(), value);
    pos += value.size();
  }
  return text;
}

std::string answer_for(const TaskItem &item) {
  switch (item.task) {
    case Task::EC: return "<EC>" + item.ec + "</EC>";
    case Task::FS: return "<SMILES>" + item.product + "</SMILES>";
    case Task::RS: return "<SMILES>" + item.substrates + "</SMILES>";
  }
  return {};
}

std::string target_for(const TaskItem &item) {
  switch (item.task) {
    case Task::EC: return item.ec;
    case Task::FS: return item.product;
    case Task::RS: return item.substrates;
  }
  return {};
}

}  // namespace

ChatRecord render_record(const TaskItem &item, const TemplatePool &pool,
                         std::uint64_t seed) {
  const TaskTemplates &templates = pool.for_task(item.task);
  std::uint64_t pick = fnv1a_u64(seed, fnv1a(item.record_id));
  std::size_t index = pick % templates.user_templates.size();

  std::string user = templates.user_templates[index];
  user = substitute(user, "{SUBSTRATES}", item.substrates);
  user = substitute(user, "{PRODUCT}", item.product);
  user = substitute(user, "{EC}", item.ec);
  if (user.find("{SUBSTRATES}") != std::string::npos ||
      user.find("{PRODUCT}") != std::string::npos ||
      user.find("{EC}") != std::string::npos) {
    throw TemplateError("unresolved placeholder in: " + user);
  }

  ChatRecord record;
  record.record_id = item.record_id;
  record.task = item.task;
  record.group_id = item.group_id;
  record.split = item.split;
  record.template_index = index;
  record.seed = seed;
  record.target = target_for(item);
  record.messages.push_back({"system", templates.system_prompt});
  record.messages.push_back({"user", user});
  if (item.split != "test") {
    record.messages.push_back({"assistant", answer_for(item)});
  }
  return record;
}

std::string chat_record_to_jsonl(const ChatRecord &record) {
  ordered_json doc;
  doc["id"] = record.record_id;
  ordered_json messages = ordered_json::array();
  for (const ChatMessage &m : record.messages) {
    ordered_json msg;
    msg["role"] = m.role;
    msg["content"] = m.content;
    messages.push_back(std::move(msg));
  }
  doc["messages"] = std::move(messages);
  doc["task"] = corpus::to_string(record.task);
  doc["group_id"] = record.group_id;
  doc["split"] = record.split;
  if (record.split == "test") doc["target"] = record.target;
  return doc.dump();
}

ChatRecord chat_record_from_jsonl(const std::string &line) {
  ordered_json doc = ordered_json::parse(line);
  ChatRecord record;
  record.record_id = doc.at("id").get<std::string>();
  for (const auto &m : doc.at("messages")) {
    record.messages.push_back({m.at("role").get<std::string>(),
                               m.at("content").get<std::string>()});
  }
  record.task = corpus::task_from_string(doc.at("task").get<std::string>());
  record.group_id = doc.value("group_id", "");
  record.split = doc.value("split", "");
  record.target = doc.value("target", "");
  return record;
}

std::vector<ChatRecord> load_chat_jsonl(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open corpus file: " + path);
  std::vector<ChatRecord> records;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    records.push_back(chat_record_from_jsonl(line));
  }
  return records;
}

namespace {

void write_lines(const std::string &path,
                 const std::vector<std::string> &lines) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write corpus file: " + path);
  for (const std::string &line : lines) out << line << "\n";
}

}  // namespace

EmitReport emit_corpus(const corpus::Manifest &manifest,
                       const TemplatePool &pool, CorpusMode mode,
                       const std::string &out_dir, std::uint64_t seed) {
  std::filesystem::create_directories(out_dir);
  // record index -> owning group
  std::vector<std::size_t> group_of(manifest.records.size());
  for (std::size_t g = 0; g < manifest.groups.size(); ++g) {
    for (std::size_t r : manifest.groups[g].members) group_of[r] = g;
  }

  std::map<std::string, std::vector<std::string>> lines_by_file;
  std::unordered_set<std::string> test_smiles;
  std::vector<std::pair<std::string, std::string>> train_answers;  // id, text

  for (std::size_t r = 0; r < manifest.records.size(); ++r) {
    std::size_t g = group_of[r];
    if (!manifest.assignment.group_included[g]) continue;
    const corpus::ReactionRecord &record = manifest.records[r];
    corpus::Split split = manifest.assignment.group_split[g];
    TaskItem item;
    item.record_id = record.id;
    item.group_id = manifest.groups[g].id;
    item.substrates = record.substrates;
    item.product = record.product;
    item.ec = record.ec.str();
    item.task = manifest.assignment.group_task[g];
    if (split == corpus::Split::Test) {
      item.split = "test";
      test_smiles.insert(record.substrates);
      test_smiles.insert(record.product);
    } else {
      item.split = manifest.assignment.record_validation[r] ? "val" : "train";
    }
    ChatRecord chat = render_record(item, pool, seed);
    std::string file = corpus::to_string(item.task) + "_" + item.split +
                       ".jsonl";
    lines_by_file[file].push_back(chat_record_to_jsonl(chat));
    if (item.split == "train" && item.task != Task::EC) {
      train_answers.push_back({record.id, chat.target});
    }
  }

  EmitReport report;
  for (const auto &[id, answer] : train_answers) {
    if (test_smiles.count(answer)) {
      ++report.answer_leak_count;
      if (report.answer_leak_samples.size() < 10) {
        report.answer_leak_samples.push_back(id);
      }
    }
  }

  for (const auto &[file, lines] : lines_by_file) {
    write_lines(out_dir + "/" + file, lines);
    report.file_counts[file] = lines.size();
  }
  if (mode == CorpusMode::MultiTask) {
    std::vector<std::string> merged;
    for (Task task : {Task::EC, Task::FS, Task::RS}) {
      const std::string file = corpus::to_string(task) + "_train.jsonl";
      auto it = lines_by_file.find(file);
      if (it == lines_by_file.end()) continue;
      merged.insert(merged.end(), it->second.begin(), it->second.end());
    }
    Rng rng(seed ^ 0x6d745f7368ULL);
    rng.shuffle(merged);
    write_lines(out_dir + "/mt_train.jsonl", merged);
    report.file_counts["mt_train.jsonl"] = merged.size();
  }
  return report;
}

}  // namespace enzybench::prompt
