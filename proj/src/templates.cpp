#include "enzybench/prompt/templates.hpp"

#include <fstream>

#include <nlohmann/json.hpp>

#include "enzybench/util/error.hpp"

namespace enzybench::prompt {

using corpus::Task;

TemplatePool TemplatePool::builtin() {
  TemplatePool pool;
  TaskTemplates ec;
  ec.system_prompt =
      "You are an assistant with expert knowledge of biochemistry and "
      "enzymatic reactions. Task: Enzyme Commission number prediction. "
      "Objective: given the substrates and the product of an enzymatic "
      "reaction in SMILES notation, answer with the four-digit EC number "
      "of the catalyzing enzyme, wrapped in <EC></EC> tags.";
  ec.user_templates = {
      "Predict the EC number of the enzymatic reaction that converts "
      "{SUBSTRATES} into {PRODUCT}.",
      "Which enzyme commission number catalyzes the reaction "
      "{SUBSTRATES}>>{PRODUCT}? Answer with all four digits.",
      "Given the substrates {SUBSTRATES} and the product {PRODUCT}, assign "
      "the EC number of this reaction.",
      "An enzyme turns {SUBSTRATES} into {PRODUCT}. State the EC number "
      "describing this transformation.",
  };
  TaskTemplates fs;
  fs.system_prompt =
      "You are an assistant with expert knowledge of biochemistry and "
      "enzymatic reactions. Task: forward synthesis. Objective: given the "
      "substrates of an enzymatic reaction in SMILES notation and the EC "
      "number of the enzyme, answer with the SMILES of the product, "
      "wrapped in <SMILES></SMILES> tags.";
  fs.user_templates = {
      "Predict the product of the enzymatic reaction of {SUBSTRATES} "
      "catalyzed by the enzyme EC {EC}.",
      "Which product is formed when {SUBSTRATES} react under enzyme class "
      "{EC}?",
      "Given the substrates {SUBSTRATES} and the enzyme {EC}, provide the "
      "SMILES of the resulting product.",
      "Complete the biocatalyzed reaction of {SUBSTRATES} with EC {EC}: "
      "what is the product?",
  };
  TaskTemplates rs;
  rs.system_prompt =
      "You are an assistant with expert knowledge of biochemistry and "
      "enzymatic reactions. Task: retrosynthesis. Objective: given the "
      "product of an enzymatic reaction in SMILES notation and the EC "
      "number of the enzyme, answer with the SMILES of the substrates, "
      "wrapped in <SMILES></SMILES> tags.";
  rs.user_templates = {
      "Predict the substrates that yield {PRODUCT} under the enzyme EC "
      "{EC}.",
      "Which substrates react to {PRODUCT} when catalyzed by enzyme class "
      "{EC}?",
      "Given the product {PRODUCT} and the enzyme {EC}, provide the SMILES "
      "of the substrates.",
      "Work backwards from {PRODUCT} with EC {EC}: which substrates does "
      "this reaction start from?",
  };
  pool.tasks_[Task::EC] = std::move(ec);
  pool.tasks_[Task::FS] = std::move(fs);
  pool.tasks_[Task::RS] = std::move(rs);
  pool.check();
  return pool;
}

TemplatePool TemplatePool::load(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open template file: " + path);
  nlohmann::json doc = nlohmann::json::parse(in);
  TemplatePool pool;
  for (Task task : {Task::EC, Task::FS, Task::RS}) {
    const std::string key = corpus::to_string(task);
    if (!doc.contains(key)) {
      throw TemplateError("template file lacks task '" + key + "'");
    }
    TaskTemplates entry;
    entry.system_prompt = doc[key].at("system").get<std::string>();
    for (const auto &t : doc[key].at("user")) {
      entry.user_templates.push_back(t.get<std::string>());
    }
    pool.tasks_[task] = std::move(entry);
  }
  pool.check();
  return pool;
}

const TaskTemplates &TemplatePool::for_task(Task task) const {
  return tasks_.at(task);
}

TaskTemplates &TemplatePool::for_task(Task task) { return tasks_.at(task); }

std::vector<std::string> TemplatePool::required_placeholders(Task task) {
  switch (task) {
    case Task::EC: return {"{SUBSTRATES}", "{PRODUCT}"};
    case Task::FS: return {"{SUBSTRATES}", "{EC}"};
    case Task::RS: return {"{PRODUCT}", "{EC}"};
  }
  return {};
}

void TemplatePool::check() const {
  for (const auto &[task, entry] : tasks_) {
    if (entry.user_templates.size() < 3) {
      throw TemplateError("task " + corpus::to_string(task) +
                          " needs at least 3 templates");
    }
    for (const std::string &tmpl : entry.user_templates) {
      for (const std::string &ph : required_placeholders(task)) {
        if (tmpl.find(ph) == std::string::npos) {
          throw TemplateError("template missing placeholder " + ph + ": " +
                              tmpl);
        }
      }
    }
  }
}

}  // namespace enzybench::prompt
