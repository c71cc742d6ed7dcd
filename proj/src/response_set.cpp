#include "enzybench/client/client.hpp"

#include <fstream>

#include <nlohmann/json.hpp>

namespace enzybench::client {

using ordered_json = nlohmann::ordered_json;

void save_response_set(const ResponseSet &responses, const std::string &path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write response set: " + path);
  for (const auto &[id, e] : responses.entries) {
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
    out << doc.dump() << "\n";
  }
  ordered_json meta;
  meta["model"] = responses.model;
  meta["params_hash"] = responses.params_hash;
  meta["timestamp"] = responses.timestamp;
  meta["run_index"] = responses.run_index;
  std::ofstream meta_out(path + ".meta.json", std::ios::binary);
  if (meta_out) meta_out << meta.dump(2) << "\n";
}

ResponseSet replay(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open response set: " + path);
  ResponseSet responses;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.empty()) continue;
    try {
      ordered_json doc = ordered_json::parse(line);
      ResponseEntry entry;
      std::string id = doc.at("id").get<std::string>();
      entry.raw = doc.value("raw", "");
      entry.latency_ms = doc.value("latency_ms", 0L);
      entry.attempts = doc.value("attempts", 1);
      if (doc.contains("error") && !doc["error"].is_null()) {
        entry.error = doc["error"].get<std::string>();
      }
      if (responses.entries.count(id)) {
        throw SchemaError("duplicate response id " + id);
      }
      responses.entries[id] = std::move(entry);
    } catch (const SchemaError &) {
      throw;
    } catch (const std::exception &err) {
      throw SchemaError("malformed response line " +
                        std::to_string(line_number) + ": " + err.what());
    }
  }
  if (responses.entries.empty()) {
    throw SchemaError("response set is empty: " + path);
  }
  std::ifstream meta_in(path + ".meta.json");
  if (meta_in) {
    try {
      ordered_json meta = ordered_json::parse(meta_in);
      responses.model = meta.value("model", "");
      responses.params_hash = meta.value("params_hash", "");
      responses.timestamp = meta.value("timestamp", "");
      responses.run_index = meta.value("run_index", 1);
    } catch (const std::exception &) {
      // sidecar is advisory; a broken one does not block replay
    }
  }
  return responses;
}

}  // namespace enzybench::client
