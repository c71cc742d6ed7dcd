#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "enzybench/corpus/manifest.hpp"
#include "enzybench/prompt/templates.hpp"

namespace enzybench::prompt {

struct ChatMessage {
  std::string role;  // system | user | assistant
  std::string content;
};

// One task instance rendered as a conversation. Test records carry no
// assistant message; the expected answer lives in `target` instead.
struct ChatRecord {
  std::string record_id;
  std::vector<ChatMessage> messages;
  corpus::Task task = corpus::Task::EC;
  std::string group_id;
  std::string split;  // train | val | test
  std::string target;
  std::size_t template_index = 0;
  std::uint64_t seed = 0;
};

struct TaskItem {
  std::string record_id;
  std::string group_id;
  std::string substrates;
  std::string product;
  std::string ec;
  corpus::Task task = corpus::Task::EC;
  std::string split;  // train | val | test
};

// Deterministic render: template picked by seeded hash of (record id, seed).
ChatRecord render_record(const TaskItem &item, const TemplatePool &pool,
                         std::uint64_t seed);

std::string chat_record_to_jsonl(const ChatRecord &record);
ChatRecord chat_record_from_jsonl(const std::string &line);
std::vector<ChatRecord> load_chat_jsonl(const std::string &path);

enum class CorpusMode { SingleTask, MultiTask };

struct EmitReport {
  std::map<std::string, std::size_t> file_counts;
  // Train assistant answers colliding verbatim with a test-split SMILES;
  // possible across EC numbers, reported rather than fatal.
  std::size_t answer_leak_count = 0;
  std::vector<std::string> answer_leak_samples;
};

// Writes {task}_{split}.jsonl (and mt_train.jsonl in multitask mode, a
// seeded shuffle of the three train files) under out_dir.
EmitReport emit_corpus(const corpus::Manifest &manifest,
                       const TemplatePool &pool, CorpusMode mode,
                       const std::string &out_dir, std::uint64_t seed);

}  // namespace enzybench::prompt
