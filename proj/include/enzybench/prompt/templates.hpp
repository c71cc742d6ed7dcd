#pragma once

#include <map>
#include <string>
#include <vector>

#include "enzybench/corpus/split.hpp"

namespace enzybench::prompt {

// Per-task user-prompt templates plus one system prompt. Placeholders are
// {SUBSTRATES}, {PRODUCT} and {EC}; each task requires two of them.
struct TaskTemplates {
  std::string system_prompt;
  std::vector<std::string> user_templates;
};

class TemplatePool {
 public:
  static TemplatePool builtin();
  // JSON asset file override; same schema as data/templates.json.
  static TemplatePool load(const std::string &path);

  const TaskTemplates &for_task(corpus::Task task) const;
  TaskTemplates &for_task(corpus::Task task);

  // Throws TemplateError unless every template carries the placeholders its
  // task requires and each task has at least 3 templates.
  void check() const;

  static std::vector<std::string> required_placeholders(corpus::Task task);

 private:
  std::map<corpus::Task, TaskTemplates> tasks_;
};

}  // namespace enzybench::prompt
