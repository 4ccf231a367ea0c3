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

#ifndef TEXT2MDT_DATA_HPP
#define TEXT2MDT_DATA_HPP

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "text2mdt/core.hpp"

namespace text2mdt {

/// One annotated text with its tree in preorder. The tree is kept as a raw
/// node list so that lenient loading can carry invalid trees along.
struct DatasetRecord {
  std::string id;
  std::string text;
  std::vector<MdtNode> tree;

  friend bool operator==(const DatasetRecord&, const DatasetRecord&) = default;
};

struct RecordIssue {
  std::string record_id;
  Violation violation;
};

struct LoadResult {
  std::vector<DatasetRecord> records;
  std::vector<RecordIssue> violations;
  std::vector<RecordIssue> warnings;
  /// Input fields the reader did not map onto the schema.
  std::vector<std::string> unmapped_fields;
};

/// Reads line-delimited JSON records (a single JSON array is also accepted).
/// Throws ParseError on malformed JSON and SchemaError on missing fields; in
/// strict mode any violation raises ValidationError, in lenient mode they are
/// collected per record.
/// With `raise_on_violation` cleared, strict-mode violations are collected
/// instead of thrown (used by the validate command).
LoadResult read_dataset(std::istream& in, ValidationMode mode = ValidationMode::Strict,
                        bool raise_on_violation = true);
LoadResult load_dataset(const std::filesystem::path& path, ValidationMode mode = ValidationMode::Strict,
                        bool raise_on_violation = true);

/// Record-level checks (unique ids, nonempty text) plus validate_tree with
/// dataset conformance, appended to `result`.
void validate_records(LoadResult& result, ValidationMode mode);

/// Canonical writer: one record per line, fixed key order, UTF-8.
void write_dataset(std::ostream& out, const std::vector<DatasetRecord>& records);
void save_dataset(const std::filesystem::path& path, const std::vector<DatasetRecord>& records);

// ---------------------------------------------------------------------------
// Corpus statistics

struct NodeCounts {
  std::size_t total = 0;
  std::size_t decision = 0;
  std::size_t condition = 0;
  std::size_t and_rel = 0;
  std::size_t or_rel = 0;
  std::size_t null_rel = 0;

  friend bool operator==(const NodeCounts&, const NodeCounts&) = default;
};

struct CorpusStats {
  std::size_t record_count = 0;
  std::map<std::size_t, std::size_t> depth_histogram;
  /// Keyed by canonical relation name; unknown labels keep their spelling.
  std::map<std::string, std::size_t> relation_histogram;
  /// Every node, empty decision placeholders included.
  NodeCounts all_nodes;
  /// Nodes holding at least one triplet. Node totals and averages below
  /// follow this convention.
  NodeCounts node_counts;
  std::size_t placeholder_count = 0;
  std::size_t triplet_count = 0;
  double avg_nodes_per_tree = 0.0;
  double avg_triplets_per_tree = 0.0;
  std::size_t seo_record_count = 0;
};

/// Throws InvalidTree if a record's tree does not reconstruct.
CorpusStats compute_stats(const std::vector<DatasetRecord>& records);

/// Two distinct triplets sharing exactly one entity mention (exact strings).
bool has_single_entity_overlap(std::span<const Triplet> triplets);

// ---------------------------------------------------------------------------
// Agreement

/// Cohen's kappa over the label alphabet found in the inputs.
double cohens_kappa(std::span<const std::string> labels_a, std::span<const std::string> labels_b);

// ---------------------------------------------------------------------------
// Subtask datasets

enum class SubtaskKind { TE, NG, TA };

std::string_view to_string(SubtaskKind k);

struct SubtaskRecord {
  SubtaskKind kind = SubtaskKind::TE;
  std::string id;         // "<record id>#<copy>"
  std::string source_id;
  std::size_t copy = 0;
  std::string text;
  std::vector<Triplet> input_triplets;  // NG
  std::vector<NodeGroup> input_nodes;   // TA
  std::vector<Triplet> target_triplets; // TE
  std::vector<NodeGroup> target_groups; // NG
  std::vector<MdtNode> target_tree;     // TA

  friend bool operator==(const SubtaskRecord&, const SubtaskRecord&) = default;
};

struct SubtaskSets {
  std::vector<SubtaskRecord> te;
  std::vector<SubtaskRecord> ng;
  std::vector<SubtaskRecord> ta;
};

/// TE gets one record per input. NG and TA get max(1, augment_factor) copies
/// per input: copy 0 keeps the annotated order, later copies shuffle the
/// triplet (NG) or node (TA) order with a stream derived from
/// (seed, record id, copy).
SubtaskSets build_subtasks(const std::vector<DatasetRecord>& records, std::size_t augment_factor,
                           std::uint64_t seed);

/// Deterministic Fisher-Yates permutation of [0, n) for one (seed, key, copy).
std::vector<std::size_t> shuffled_order(std::size_t n, std::uint64_t seed, std::string_view key,
                                        std::size_t copy);

void write_subtask_records(std::ostream& out, const std::vector<SubtaskRecord>& records);

}  // namespace text2mdt

#endif  // TEXT2MDT_DATA_HPP
