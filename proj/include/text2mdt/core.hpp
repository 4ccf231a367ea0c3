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

// Medical decision trees: triplets, nodes, and the binary tree they form.
//
// A tree is exchanged as the preorder sequence of its nodes. Condition
// nodes always own two children (left = "Yes", right = "No") and decision
// nodes are leaves, so the roles alone fix the shape of the tree.

#ifndef TEXT2MDT_CORE_HPP
#define TEXT2MDT_CORE_HPP

#include <compare>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "text2mdt/error.hpp"

namespace text2mdt {

enum class RelationType {
  ClinicalFeature,
  TherapeuticDrug,
  MedicalOption,
  UsageOrDosage,
  ForbiddenDrug,
  BasicInformation,
};

inline constexpr RelationType kAllRelationTypes[] = {
    RelationType::ClinicalFeature, RelationType::TherapeuticDrug, RelationType::MedicalOption,
    RelationType::UsageOrDosage,   RelationType::ForbiddenDrug,   RelationType::BasicInformation,
};

std::string_view to_string(RelationType r);

/// Resolves a relation label. Accepts the canonical snake_case names and the
/// Chinese labels used by the upstream corpus release.
std::optional<RelationType> parse_relation(std::string_view label);

/// A (subject, relation, object) fact. The relation is kept verbatim so that
/// lenient loading can preserve labels outside the closed vocabulary.
struct Triplet {
  std::string subject;
  std::string relation;
  std::string object;

  friend auto operator<=>(const Triplet&, const Triplet&) = default;
  friend bool operator==(const Triplet&, const Triplet&) = default;
};

enum class Role { Condition, Decision };
enum class LogicalRel { And, Or, Null };

std::string_view to_string(Role r);
std::string_view to_string(LogicalRel l);
std::optional<Role> parse_role(std::string_view s);
std::optional<LogicalRel> parse_logical_rel(std::string_view s);

struct MdtNode {
  Role role = Role::Decision;
  std::vector<Triplet> triplets;
  LogicalRel logical_rel = LogicalRel::Null;

  friend bool operator==(const MdtNode&, const MdtNode&) = default;
};

/// A node without a role: the output of node grouping and the input of tree
/// assembly.
struct NodeGroup {
  std::vector<Triplet> triplets;
  LogicalRel logical_rel = LogicalRel::Null;

  friend bool operator==(const NodeGroup&, const NodeGroup&) = default;
};

/// Triplets sorted by (subject, relation, object). Metrics compare nodes
/// through this view so that triplet order inside a node is irrelevant.
std::vector<Triplet> canonical_triplets(const MdtNode& node);

/// Two nodes with the same role, logical relation and triplet multiset.
bool same_content(const MdtNode& a, const MdtNode& b);

// ---------------------------------------------------------------------------
// Validation

enum class ValidationMode { Strict, Lenient };

enum class Rule {
  PrematureExhaustion,   // structure.premature-exhaustion
  LeftoverNodes,         // structure.leftover-nodes
  LogicalRelMismatch,    // node.logical-rel-mismatch
  EmptyCondition,        // node.empty-condition
  EmptyTripletField,     // triplet.empty-field
  UnknownRelation,       // triplet.unknown-relation
  ShallowTree,           // dataset.shallow-tree
  EmptyText,             // record.empty-text
  DuplicateId,           // record.duplicate-id
};

std::string_view rule_id(Rule r);

struct Violation {
  std::size_t node_index = 0;
  Rule rule = Rule::PrematureExhaustion;
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;
  /// Findings that do not make the tree invalid (lenient relation labels,
  /// dataset-conformance notes).
  std::vector<Violation> warnings;

  bool ok() const noexcept { return violations.empty(); }
};

struct ValidationOptions {
  ValidationMode mode = ValidationMode::Strict;
  /// Additionally warn about trees shallower than the corpus minimum (depth 2).
  bool dataset_conformance = false;
};

/// Checks every tree and node invariant. Throws MalformedInput on an empty
/// sequence; everything else is reported as data.
ValidationReport validate_tree(std::span<const MdtNode> nodes, ValidationOptions options = {});

// ---------------------------------------------------------------------------
// Tree

/// Binary decision tree with explicit child links, stored in preorder.
/// Only constructible from a preorder sequence that encodes exactly one tree.
class Mdt {
 public:
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  /// Throws PrematureExhaustion or LeftoverNodes.
  static Mdt from_preorder(std::vector<MdtNode> nodes);

  std::size_t size() const noexcept { return nodes_.size(); }
  std::size_t root() const noexcept { return 0; }
  const MdtNode& node(std::size_t i) const { return nodes_.at(i); }
  std::size_t left(std::size_t i) const { return left_.at(i); }
  std::size_t right(std::size_t i) const { return right_.at(i); }
  bool is_leaf(std::size_t i) const { return left_.at(i) == npos; }
  std::span<const MdtNode> preorder() const noexcept { return nodes_; }

  /// Number of levels; a single decision node has depth 1.
  std::size_t depth() const noexcept { return depth_; }

  friend bool operator==(const Mdt& a, const Mdt& b) { return a.nodes_ == b.nodes_; }

 private:
  Mdt() = default;

  std::vector<MdtNode> nodes_;
  std::vector<std::size_t> left_;
  std::vector<std::size_t> right_;
  std::size_t depth_ = 0;
};

inline Mdt parse_preorder(std::vector<MdtNode> nodes) { return Mdt::from_preorder(std::move(nodes)); }
inline Mdt parse_preorder(std::span<const MdtNode> nodes) {
  return Mdt::from_preorder(std::vector<MdtNode>(nodes.begin(), nodes.end()));
}

/// Walks the explicit links root-left-right.
std::vector<MdtNode> serialize_preorder(const Mdt& tree);

enum class Branch { Left, Right, Terminal };

std::string_view to_string(Branch b);

struct PathStep {
  MdtNode node;
  Branch branch = Branch::Terminal;

  friend bool operator==(const PathStep&, const PathStep&) = default;
};

struct DecisionPath {
  std::vector<PathStep> steps;

  friend bool operator==(const DecisionPath&, const DecisionPath&) = default;
};

/// One path per leaf, ordered left to right.
std::vector<DecisionPath> decision_paths(const Mdt& tree);

/// All triplets of the tree in preorder. Duplicates across nodes are kept
/// unless `deduplicate` is set, in which case the first occurrence wins.
std::vector<Triplet> extract_triplets(const Mdt& tree, bool deduplicate = false);
std::vector<Triplet> extract_triplets(std::span<const MdtNode> nodes, bool deduplicate = false);

}  // namespace text2mdt

#endif  // TEXT2MDT_CORE_HPP
