// Copyright 2026 The text2mdt Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "text2mdt/io.hpp"

#include <initializer_list>

namespace text2mdt::io {

namespace {

const Json* find_any(const Json& obj, std::initializer_list<const char*> keys) {
  for (const char* k : keys) {
    auto it = obj.find(k);
    if (it != obj.end()) return &*it;
  }
  return nullptr;
}

std::string as_string(const Json& j, const char* what) {
  if (!j.is_string()) throw SchemaError(std::string(what) + " must be a string");
  return j.get<std::string>();
}

void note_unmapped(const Json& obj, std::initializer_list<const char*> known, const std::string& where,
                   std::vector<std::string>* unmapped) {
  if (!unmapped) return;
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool found = false;
    for (const char* k : known) found = found || it.key() == k;
    if (!found) unmapped->push_back(where + "." + it.key());
  }
}

}  // namespace

Json to_json(const Triplet& t) { return Json::array({t.subject, t.relation, t.object}); }

Json to_json(const MdtNode& n) {
  Json triples = Json::array();
  for (const Triplet& t : n.triplets) triples.push_back(to_json(t));
  Json j;
  j["role"] = std::string(to_string(n.role));
  j["triples"] = std::move(triples);
  j["logic_rel"] = std::string(to_string(n.logical_rel));
  return j;
}

Json to_json(const NodeGroup& g) {
  Json triples = Json::array();
  for (const Triplet& t : g.triplets) triples.push_back(to_json(t));
  Json j;
  j["triples"] = std::move(triples);
  j["logic_rel"] = std::string(to_string(g.logical_rel));
  return j;
}

Json to_json(const DatasetRecord& r) {
  Json tree = Json::array();
  for (const MdtNode& n : r.tree) tree.push_back(to_json(n));
  Json j;
  j["id"] = r.id;
  j["text"] = r.text;
  j["tree"] = std::move(tree);
  return j;
}

Json to_json(const SubtaskRecord& r) {
  auto triplets = [](const std::vector<Triplet>& ts) {
    Json a = Json::array();
    for (const Triplet& t : ts) a.push_back(to_json(t));
    return a;
  };
  auto groups = [](const std::vector<NodeGroup>& gs) {
    Json a = Json::array();
    for (const NodeGroup& g : gs) a.push_back(to_json(g));
    return a;
  };
  Json input;
  input["text"] = r.text;
  Json target;
  switch (r.kind) {
    case SubtaskKind::TE:
      target = triplets(r.target_triplets);
      break;
    case SubtaskKind::NG:
      input["triples"] = triplets(r.input_triplets);
      target = groups(r.target_groups);
      break;
    case SubtaskKind::TA: {
      input["nodes"] = groups(r.input_nodes);
      target = Json::array();
      for (const MdtNode& n : r.target_tree) target.push_back(to_json(n));
      break;
    }
  }
  Json j;
  j["id"] = r.id;
  j["source_id"] = r.source_id;
  j["task"] = std::string(to_string(r.kind));
  j["copy"] = r.copy;
  j["input"] = std::move(input);
  j["target"] = std::move(target);
  return j;
}

Triplet triplet_from_json(const Json& j) {
  if (j.is_array()) {
    if (j.size() != 3) throw SchemaError("triplet must have exactly three fields");
    return {as_string(j[0], "triplet subject"), as_string(j[1], "triplet relation"),
            as_string(j[2], "triplet object")};
  }
  if (j.is_object()) {
    const Json* s = find_any(j, {"subject", "sub", "head"});
    const Json* r = find_any(j, {"relation", "rel", "predicate"});
    const Json* o = find_any(j, {"object", "obj", "tail"});
    if (!s || !r || !o) throw SchemaError("triplet object lacks subject, relation or object");
    return {as_string(*s, "triplet subject"), as_string(*r, "triplet relation"), as_string(*o, "triplet object")};
  }
  throw SchemaError("triplet must be an array or object");
}

MdtNode node_from_json(const Json& j, std::vector<std::string>* unmapped) {
  if (!j.is_object()) throw SchemaError("tree node must be an object");
  const Json* role = find_any(j, {"role"});
  const Json* triples = find_any(j, {"triples", "triplets"});
  const Json* logic = find_any(j, {"logic_rel", "logical_rel", "logic", "logical_relation"});
  if (!role) throw SchemaError("tree node lacks 'role'");
  if (!triples) throw SchemaError("tree node lacks 'triples'");

  MdtNode n;
  const std::string role_s = as_string(*role, "role");
  auto r = parse_role(role_s);
  if (!r) throw SchemaError("unknown role '" + role_s + "'");
  n.role = *r;

  if (!triples->is_array()) throw SchemaError("'triples' must be an array");
  for (const Json& t : *triples) n.triplets.push_back(triplet_from_json(t));

  if (logic && !logic->is_null()) {
    const std::string l = as_string(*logic, "logic_rel");
    auto lr = parse_logical_rel(l);
    if (!lr) throw SchemaError("unknown logical relation '" + l + "'");
    n.logical_rel = *lr;
  }
  note_unmapped(j, {"role", "triples", "triplets", "logic_rel", "logical_rel", "logic", "logical_relation"},
                "node", unmapped);
  return n;
}

std::vector<MdtNode> nodes_from_json(const Json& j, std::vector<std::string>* unmapped) {
  if (!j.is_array()) throw SchemaError("tree must be an array of nodes");
  std::vector<MdtNode> out;
  for (const Json& n : j) out.push_back(node_from_json(n, unmapped));
  return out;
}

DatasetRecord record_from_json(const Json& j, const std::string& fallback_id, bool allow_missing_id,
                               std::vector<std::string>* unmapped) {
  if (!j.is_object()) throw SchemaError("record must be a JSON object");
  DatasetRecord r;
  if (const Json* id = find_any(j, {"id", "record_id"})) {
    r.id = id->is_string() ? id->get<std::string>() : id->dump();
  } else if (allow_missing_id) {
    r.id = fallback_id;
  } else {
    throw SchemaError("record lacks 'id'");
  }
  const Json* text = find_any(j, {"text"});
  const Json* tree = find_any(j, {"tree"});
  if (!text) throw SchemaError("record '" + r.id + "' lacks 'text'");
  if (!tree) throw SchemaError("record '" + r.id + "' lacks 'tree'");
  r.text = as_string(*text, "text");
  r.tree = nodes_from_json(*tree, unmapped);
  note_unmapped(j, {"id", "record_id", "text", "tree"}, "record", unmapped);
  return r;
}

std::string dump_line(const Json& j) { return j.dump(-1, ' ', false, Json::error_handler_t::strict); }

}  // namespace text2mdt::io
