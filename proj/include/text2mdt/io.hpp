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

// JSON mapping of the record schema:
//
//   {"id": "...", "text": "...",
//    "tree": [{"role": "C"|"D", "triples": [[sub, rel, obj], ...],
//              "logic_rel": "and"|"or"|"null"}, ...]}
//
// The reader also accepts spellings found in the upstream release
// ("logical_rel", "triplets", full role names, objects for triplets).

#ifndef TEXT2MDT_IO_HPP
#define TEXT2MDT_IO_HPP

#include <string>
#include <vector>

#include "json.hpp"
#include "text2mdt/data.hpp"

namespace text2mdt::io {

using Json = nlohmann::ordered_json;

Json to_json(const Triplet& t);
Json to_json(const MdtNode& n);
Json to_json(const NodeGroup& g);
Json to_json(const DatasetRecord& r);
Json to_json(const SubtaskRecord& r);

/// Throws SchemaError. Unrecognised keys are appended to `unmapped` when given.
Triplet triplet_from_json(const Json& j);
MdtNode node_from_json(const Json& j, std::vector<std::string>* unmapped = nullptr);
std::vector<MdtNode> nodes_from_json(const Json& j, std::vector<std::string>* unmapped = nullptr);

/// `fallback_id` is used when the record has no id field and `allow_missing_id`.
DatasetRecord record_from_json(const Json& j, const std::string& fallback_id, bool allow_missing_id,
                               std::vector<std::string>* unmapped = nullptr);

/// Compact single-line dump with UTF-8 kept as is.
std::string dump_line(const Json& j);

}  // namespace text2mdt::io

#endif  // TEXT2MDT_IO_HPP
