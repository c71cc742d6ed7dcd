#include "enzybench/eval/metrics.hpp"

namespace enzybench::eval {

namespace {

std::string trim_copy(const std::string &s) {
  std::size_t begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return {};
  std::size_t end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

// All complete open..close spans, in order.
std::vector<std::string> complete_spans(const std::string &raw,
                                        const std::string &open,
                                        const std::string &close) {
  std::vector<std::string> spans;
  std::size_t pos = 0;
  while (true) {
    std::size_t begin = raw.find(open, pos);
    if (begin == std::string::npos) break;
    std::size_t end = raw.find(close, begin + open.size());
    if (end == std::string::npos) break;
    spans.push_back(raw.substr(begin + open.size(),
                               end - begin - open.size()));
    pos = end + close.size();
  }
  return spans;
}

}  // namespace

ParsedPrediction parse_response(const std::string &raw, corpus::Task task) {
  ParsedPrediction parsed;
  parsed.task = task;
  const bool ec_task = task == corpus::Task::EC;
  const std::string open = ec_task ? "<EC>" : "<SMILES>";
  const std::string close = ec_task ? "</EC>" : "</SMILES>";

  std::vector<std::string> spans = complete_spans(raw, open, close);
  if (spans.empty()) {
    parsed.format_error = "missing " + open + " tag";
    return parsed;
  }
  if (spans.size() > 1) {
    parsed.format_error = "duplicated " + open + " tag";
    return parsed;
  }
  std::string content = trim_copy(spans.front());
  if (content.empty()) {
    parsed.format_error = "empty tag content";
    return parsed;
  }
  if (ec_task) {
    try {
      parsed.ec = corpus::ECNumber::parse(content);
    } catch (const FormatError &err) {
      parsed.format_error = std::string("EC arity: ") + err.what();
    }
  } else {
    parsed.smiles = content;
  }
  return parsed;
}

int score_ec(const corpus::ECNumber &pred, const corpus::ECNumber &truth) {
  int depth = 0;
  for (int position = 1; position <= 4; ++position) {
    if (pred.digit(position) != truth.digit(position)) break;
    ++depth;
  }
  return depth;
}

}  // namespace enzybench::eval
