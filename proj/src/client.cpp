#include "enzybench/client/client.hpp"

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <mutex>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "enzybench/util/config.hpp"
#include "enzybench/util/hash.hpp"

namespace enzybench::client {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

std::string CompletionParams::params_hash() const {
  json doc;
  doc["endpoint"] = endpoint;
  doc["model"] = model;
  doc["temperature"] = temperature;
  doc["max_tokens"] = max_tokens;
  doc["max_retries"] = max_retries;
  doc["max_in_flight"] = max_in_flight;
  return config_hash(doc.dump());
}

namespace {

std::string iso_timestamp() {
  std::time_t now = std::time(nullptr);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  return buf;
}

std::string entry_to_jsonl(const std::string &id, const ResponseEntry &e) {
  ordered_json doc;
  doc["id"] = id;
  doc["raw"] = e.raw;
  doc["latency_ms"] = e.latency_ms;
  doc["attempts"] = e.attempts;
  if (e.error) {
    doc["error"] = *e.error;
  } else {
    doc["error"] = nullptr;
  }
  return doc.dump();
}

bool transient_status(int status) {
  return status == 408 || status == 429 || status >= 500;
}

struct RequestResult {
  bool ok = false;
  bool retryable = false;
  std::string text;  // content or error description
};

RequestResult post_chat(httplib::Client &http, const CompletionParams &params,
                        const prompt::ChatRecord &record,
                        const std::string &api_key) {
  json body;
  body["model"] = params.model;
  json messages = json::array();
  for (const prompt::ChatMessage &m : record.messages) {
    messages.push_back({{"role", m.role}, {"content", m.content}});
  }
  body["messages"] = std::move(messages);
  body["temperature"] = params.temperature;
  body["max_tokens"] = params.max_tokens;

  httplib::Headers headers;
  if (!api_key.empty()) {
    headers.insert({"Authorization", "Bearer " + api_key});
  }
  auto res = http.Post("/chat/completions", headers, body.dump(),
                       "application/json");
  RequestResult out;
  if (!res) {
    out.retryable = true;
    out.text = "transport: " + httplib::to_string(res.error());
    return out;
  }
  if (res->status != 200) {
    out.retryable = transient_status(res->status);
    out.text = "http status " + std::to_string(res->status);
    return out;
  }
  try {
    json doc = json::parse(res->body);
    out.text = doc.at("choices").at(0).at("message").at("content")
                   .get<std::string>();
    out.ok = true;
  } catch (const std::exception &err) {
    out.text = std::string("malformed completion payload: ") + err.what();
    out.retryable = false;
  }
  return out;
}

}  // namespace

ResponseSet run_inference(const std::vector<prompt::ChatRecord> &corpus,
                          const CompletionParams &params,
                          const std::string &out_path) {
  ResponseSet responses;
  responses.model = params.model;
  responses.params_hash = params.params_hash();
  responses.timestamp = iso_timestamp();
  responses.run_index = params.run_index;

  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw IoError("cannot write response set: " + out_path);

  const char *key_env = std::getenv("ENZYBENCH_API_KEY");
  const std::string api_key = key_env ? key_env : "";

  std::mutex sink_mutex;
  std::atomic<std::size_t> cursor{0};

  auto worker = [&]() {
    httplib::Client http(params.endpoint);
    http.set_connection_timeout(params.timeout_seconds, 0);
    http.set_read_timeout(params.timeout_seconds, 0);
    for (;;) {
      std::size_t index = cursor.fetch_add(1);
      if (index >= corpus.size()) return;
      const prompt::ChatRecord &record = corpus[index];
      ResponseEntry entry;
      auto started = std::chrono::steady_clock::now();
      for (int attempt = 1; attempt <= params.max_retries + 1; ++attempt) {
        entry.attempts = attempt;
        RequestResult result = post_chat(http, params, record, api_key);
        if (result.ok) {
          entry.raw = result.text;
          entry.error.reset();
          break;
        }
        entry.error = result.text;
        if (!result.retryable || attempt == params.max_retries + 1) break;
        std::this_thread::sleep_for(std::chrono::milliseconds(
            params.retry_backoff_ms * (1 << (attempt - 1))));
      }
      entry.latency_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                             std::chrono::steady_clock::now() - started)
                             .count();
      std::lock_guard<std::mutex> lock(sink_mutex);
      out << entry_to_jsonl(record.record_id, entry) << "\n";
      out.flush();
      responses.entries[record.record_id] = std::move(entry);
    }
  };

  std::size_t n_threads =
      std::min<std::size_t>(std::max(1, params.max_in_flight), corpus.size());
  std::vector<std::thread> pool;
  pool.reserve(n_threads);
  for (std::size_t i = 0; i < n_threads; ++i) pool.emplace_back(worker);
  for (std::thread &t : pool) t.join();

  // sidecar metadata
  ordered_json meta;
  meta["model"] = responses.model;
  meta["params_hash"] = responses.params_hash;
  meta["timestamp"] = responses.timestamp;
  meta["run_index"] = responses.run_index;
  meta["endpoint"] = params.endpoint;
  meta["records"] = corpus.size();
  std::ofstream meta_out(out_path + ".meta.json", std::ios::binary);
  if (meta_out) meta_out << meta.dump(2) << "\n";
  return responses;
}

CoverageReport check_coverage(const ResponseSet &responses,
                              const std::vector<prompt::ChatRecord> &corpus) {
  CoverageReport report;
  std::map<std::string, bool> seen;
  for (const auto &[id, entry] : responses.entries) seen[id] = false;
  for (const prompt::ChatRecord &record : corpus) {
    auto it = seen.find(record.record_id);
    if (it == seen.end()) {
      report.missing_ids.push_back(record.record_id);
    } else {
      it->second = true;
    }
  }
  for (const auto &[id, used] : seen) {
    if (!used) report.extra_ids.push_back(id);
  }
  return report;
}

}  // namespace enzybench::client
