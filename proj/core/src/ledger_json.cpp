#include "gadforge/ledger_json.hpp"

#include "gadforge/error.hpp"

namespace gadforge {

namespace {

using nlohmann::json;

json edges_to_json(const std::vector<Edge>& edges) {
  json arr = json::array();
  for (const Edge& e : edges) arr.push_back({e.u, e.v});
  return arr;
}

std::vector<Edge> edges_from_json(const json& arr) {
  std::vector<Edge> out;
  for (const auto& pair : arr) out.push_back({pair.at(0).get<NodeId>(), pair.at(1).get<NodeId>()});
  return out;
}

json entry_to_json(const LedgerEntry& entry) {
  json j;
  j["node"] = entry.node;
  if (entry.edges) {
    const EdgeDelta& e = *entry.edges;
    j["added"] = edges_to_json(e.added);
    j["removed"] = edges_to_json(e.removed);
    if (e.partner) j["partner"] = *e.partner;
    if (entry.type == PerturbType::Degree) j["intensity"] = e.intensity;
  }
  if (entry.features) {
    const FeatureDelta& f = *entry.features;
    if (f.donor) j["donor"] = *f.donor;
    if (!f.replacement.empty()) j["replacement"] = f.replacement;
    if (!f.updates.empty()) {
      json ups = json::array();
      for (const auto& up : f.updates) ups.push_back({up.dim, up.value});
      j["updates"] = ups;
      j["subset"] = f.subset;
      j["scale"] = f.scale;
    }
  }
  return j;
}

LedgerEntry entry_from_json(PerturbType type, const json& j) {
  LedgerEntry entry;
  entry.type = type;
  entry.node = j.at("node").get<NodeId>();
  const bool structural = type == PerturbType::Degree || type == PerturbType::DissimilarEdge ||
                          type == PerturbType::Reorganize;
  if (structural) {
    EdgeDelta e;
    e.target = entry.node;
    e.added = edges_from_json(j.at("added"));
    e.removed = edges_from_json(j.at("removed"));
    if (j.contains("partner")) e.partner = j["partner"].get<NodeId>();
    if (j.contains("intensity")) e.intensity = j["intensity"].get<double>();
    entry.edges = std::move(e);
  } else {
    FeatureDelta f;
    f.target = entry.node;
    if (j.contains("donor")) f.donor = j["donor"].get<NodeId>();
    if (j.contains("replacement")) f.replacement = j["replacement"].get<std::vector<double>>();
    if (j.contains("updates")) {
      for (const auto& up : j["updates"]) f.updates.push_back({up.at(0).get<std::size_t>(), up.at(1).get<double>()});
      f.subset = j.at("subset").get<std::vector<std::size_t>>();
      f.scale = j.at("scale").get<double>();
    }
    entry.features = std::move(f);
  }
  return entry;
}

}  // namespace

json ledger_to_json(const PerturbationLedger& ledger) {
  json doc;
  doc["version"] = 1;
  json types = json::array();
  for (const PerturbType type : kAllPerturbTypes) {
    const std::size_t k = type_index(type);
    json t;
    t["type"] = static_cast<int>(type);
    t["name"] = std::string(type_name(type));
    t["nodes"] = ledger.nodes[k];
    t["controls"] = ledger.controls[k];
    json entries = json::array();
    for (const auto& entry : ledger.entries)
      if (entry.type == type) entries.push_back(entry_to_json(entry));
    t["entries"] = std::move(entries);
    types.push_back(std::move(t));
  }
  doc["types"] = std::move(types);
  return doc;
}

PerturbationLedger ledger_from_json(const json& doc) {
  try {
    if (doc.at("version").get<int>() != 1) throw Error(ErrorKind::Parse, "unsupported ledger version");
    PerturbationLedger ledger;
    for (const auto& t : doc.at("types")) {
      const int raw = t.at("type").get<int>();
      if (raw < 1 || raw > static_cast<int>(kNumPerturbTypes))
        throw Error(ErrorKind::Parse, "ledger type out of range");
      const auto type = static_cast<PerturbType>(raw);
      ledger.nodes[type_index(type)] = t.at("nodes").get<std::vector<NodeId>>();
      ledger.controls[type_index(type)] = t.at("controls").get<std::vector<NodeId>>();
      for (const auto& e : t.at("entries")) ledger.entries.push_back(entry_from_json(type, e));
    }
    // Restore application order: types are applied 1..5, so entries of one
    // document are already grouped by type in that order.
    return ledger;
  } catch (const nlohmann::json::exception& ex) {
    throw Error(ErrorKind::Parse, std::string("malformed ledger: ") + ex.what());
  }
}

}  // namespace gadforge
