#include "enzybench/corpus/manifest.hpp"

#include <fstream>
#include <unordered_map>

#include <nlohmann/json.hpp>

namespace enzybench::corpus {

using ordered_json = nlohmann::ordered_json;

std::string manifest_to_json(const Manifest &manifest) {
  ordered_json doc;
  doc["schema"] = "enzybench.split_manifest/1";
  doc["seed"] = manifest.assignment.seed;
  doc["config_hash"] = manifest.config_hash;
  doc["config"] = manifest.config_json.empty()
                      ? ordered_json::object()
                      : ordered_json::parse(manifest.config_json);
  ordered_json records = ordered_json::array();
  for (const ReactionRecord &r : manifest.records) {
    ordered_json rec;
    rec["id"] = r.id;
    rec["substrates"] = r.substrates;
    rec["product"] = r.product;
    rec["ec"] = r.ec.str();
    rec["class7"] = r.class7;
    records.push_back(std::move(rec));
  }
  doc["records"] = std::move(records);
  ordered_json groups = ordered_json::array();
  for (std::size_t g = 0; g < manifest.groups.size(); ++g) {
    const ReactionGroup &group = manifest.groups[g];
    ordered_json entry;
    entry["id"] = group.id;
    ordered_json members = ordered_json::array();
    for (std::size_t r : group.members) members.push_back(manifest.records[r].id);
    entry["members"] = std::move(members);
    entry["split"] = to_string(manifest.assignment.group_split[g]);
    entry["task"] = to_string(manifest.assignment.group_task[g]);
    entry["included"] = static_cast<bool>(manifest.assignment.group_included[g]);
    groups.push_back(std::move(entry));
  }
  doc["groups"] = std::move(groups);
  ordered_json validation = ordered_json::array();
  for (std::size_t r = 0; r < manifest.records.size(); ++r) {
    if (manifest.assignment.record_validation[r]) {
      validation.push_back(manifest.records[r].id);
    }
  }
  doc["validation"] = std::move(validation);
  return doc.dump(2) + "\n";
}

Manifest manifest_from_json(const std::string &json_text) {
  ordered_json doc = ordered_json::parse(json_text);
  if (!doc.contains("schema") ||
      doc["schema"].get<std::string>() != "enzybench.split_manifest/1") {
    throw SchemaError("not an enzybench split manifest");
  }
  Manifest manifest;
  manifest.config_hash = doc.value("config_hash", "");
  if (doc.contains("config")) manifest.config_json = doc["config"].dump();
  manifest.assignment.seed = doc.value("seed", std::uint64_t{0});

  std::unordered_map<std::string, std::size_t> index_of;
  for (const auto &rec : doc.at("records")) {
    ReactionRecord r;
    r.id = rec.at("id").get<std::string>();
    r.substrates = rec.at("substrates").get<std::string>();
    r.product = rec.at("product").get<std::string>();
    r.ec = ECNumber::parse(rec.at("ec").get<std::string>());
    r.class7 = rec.value("class7", false);
    index_of[r.id] = manifest.records.size();
    manifest.records.push_back(std::move(r));
  }
  manifest.assignment.record_validation.assign(manifest.records.size(), false);
  for (const auto &group : doc.at("groups")) {
    ReactionGroup g;
    g.id = group.at("id").get<std::string>();
    for (const auto &member : group.at("members")) {
      auto it = index_of.find(member.get<std::string>());
      if (it == index_of.end()) {
        throw SchemaError("group member not among records: " +
                          member.get<std::string>());
      }
      g.members.push_back(it->second);
    }
    manifest.assignment.group_split.push_back(
        split_from_string(group.at("split").get<std::string>()));
    manifest.assignment.group_task.push_back(
        task_from_string(group.at("task").get<std::string>()));
    manifest.assignment.group_included.push_back(group.value("included", true));
    manifest.groups.push_back(std::move(g));
  }
  for (const auto &id : doc.value("validation", ordered_json::array())) {
    auto it = index_of.find(id.get<std::string>());
    if (it == index_of.end()) {
      throw SchemaError("validation id not among records");
    }
    manifest.assignment.record_validation[it->second] = true;
  }
  return manifest;
}

void save_manifest(const Manifest &manifest, const std::string &path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write manifest: " + path);
  out << manifest_to_json(manifest);
}

Manifest load_manifest(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read manifest: " + path);
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  return manifest_from_json(text);
}

}  // namespace enzybench::corpus
