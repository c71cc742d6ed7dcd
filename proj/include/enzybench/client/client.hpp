#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "enzybench/prompt/render.hpp"

namespace enzybench::client {

struct CompletionParams {
  std::string endpoint;  // e.g. http://localhost:8089
  std::string model = "llama-3.1-70b-instruct";
  double temperature = 0.0;  // deterministic evaluation default
  int max_tokens = 512;
  int timeout_seconds = 120;
  int max_retries = 3;
  int max_in_flight = 4;
  int retry_backoff_ms = 250;  // doubled per attempt
  int run_index = 1;

  std::string params_hash() const;
};

struct ResponseEntry {
  std::string raw;
  long latency_ms = 0;
  int attempts = 0;
  std::optional<std::string> error;
};

// Keyed, never ordered: downstream metrics must not depend on arrival
// order. Errors are recorded per record, never dropped.
struct ResponseSet {
  std::map<std::string, ResponseEntry> entries;
  std::string model;
  std::string params_hash;
  std::string timestamp;
  int run_index = 1;
};

// Sends every test record's messages against {endpoint}/chat/completions
// with bounded concurrency and exponential backoff; appends each finished
// entry to out_path immediately so a crash loses at most in-flight items.
// The API key is read from ENZYBENCH_API_KEY when present.
ResponseSet run_inference(const std::vector<prompt::ChatRecord> &corpus,
                          const CompletionParams &params,
                          const std::string &out_path);

// Loads a stored ResponseSet without touching the network.
ResponseSet replay(const std::string &path);

void save_response_set(const ResponseSet &responses, const std::string &path);

struct CoverageReport {
  std::vector<std::string> missing_ids;  // in corpus, absent from responses
  std::vector<std::string> extra_ids;    // in responses, absent from corpus
  bool complete() const { return missing_ids.empty() && extra_ids.empty(); }
};

CoverageReport check_coverage(const ResponseSet &responses,
                              const std::vector<prompt::ChatRecord> &corpus);

}  // namespace enzybench::client
