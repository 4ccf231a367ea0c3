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

#include "text2mdt/core.hpp"

#include <algorithm>
#include <array>
#include <set>
#include <utility>

namespace text2mdt {

namespace {

struct RelationName {
  RelationType type;
  std::string_view canonical;
  std::string_view upstream;
};

constexpr std::array<RelationName, 6> kRelationNames = {{
    {RelationType::ClinicalFeature, "clinical_feature", "临床表现"},
    {RelationType::TherapeuticDrug, "therapeutic_drug", "治疗药物"},
    {RelationType::MedicalOption, "medical_option", "治疗方案"},
    {RelationType::UsageOrDosage, "usage_or_dosage", "用法用量"},
    {RelationType::ForbiddenDrug, "forbidden_drug", "禁用药物"},
    {RelationType::BasicInformation, "basic_information", "基本情况"},
}};

// Pending child slot while rebuilding a tree from preorder.
struct Slot {
  std::size_t parent;
  bool left;
};

}  // namespace

std::string_view to_string(RelationType r) {
  for (const auto& n : kRelationNames)
    if (n.type == r) return n.canonical;
  return "unknown";
}

std::optional<RelationType> parse_relation(std::string_view label) {
  for (const auto& n : kRelationNames)
    if (label == n.canonical || label == n.upstream) return n.type;
  return std::nullopt;
}

std::string_view to_string(Role r) { return r == Role::Condition ? "C" : "D"; }

std::string_view to_string(LogicalRel l) {
  switch (l) {
    case LogicalRel::And: return "and";
    case LogicalRel::Or: return "or";
    case LogicalRel::Null: break;
  }
  return "null";
}

std::optional<Role> parse_role(std::string_view s) {
  if (s == "C" || s == "c" || s == "Condition" || s == "condition") return Role::Condition;
  if (s == "D" || s == "d" || s == "Decision" || s == "decision") return Role::Decision;
  return std::nullopt;
}

std::optional<LogicalRel> parse_logical_rel(std::string_view s) {
  if (s == "and" || s == "AND" || s == "And") return LogicalRel::And;
  if (s == "or" || s == "OR" || s == "Or") return LogicalRel::Or;
  if (s == "null" || s == "NULL" || s == "Null" || s.empty()) return LogicalRel::Null;
  return std::nullopt;
}

std::string_view to_string(Branch b) {
  switch (b) {
    case Branch::Left: return "left";
    case Branch::Right: return "right";
    case Branch::Terminal: break;
  }
  return "terminal";
}

std::vector<Triplet> canonical_triplets(const MdtNode& node) {
  std::vector<Triplet> out = node.triplets;
  std::sort(out.begin(), out.end());
  return out;
}

bool same_content(const MdtNode& a, const MdtNode& b) {
  return a.role == b.role && a.logical_rel == b.logical_rel &&
         a.triplets.size() == b.triplets.size() && canonical_triplets(a) == canonical_triplets(b);
}

std::string_view rule_id(Rule r) {
  switch (r) {
    case Rule::PrematureExhaustion: return "structure.premature-exhaustion";
    case Rule::LeftoverNodes: return "structure.leftover-nodes";
    case Rule::LogicalRelMismatch: return "node.logical-rel-mismatch";
    case Rule::EmptyCondition: return "node.empty-condition";
    case Rule::EmptyTripletField: return "triplet.empty-field";
    case Rule::UnknownRelation: return "triplet.unknown-relation";
    case Rule::ShallowTree: return "dataset.shallow-tree";
    case Rule::EmptyText: return "record.empty-text";
    case Rule::DuplicateId: return "record.duplicate-id";
  }
  return "unknown";
}

ValidationReport validate_tree(std::span<const MdtNode> nodes, ValidationOptions options) {
  if (nodes.empty()) throw MalformedInput("empty preorder sequence");

  ValidationReport report;
  auto violate = [&](std::size_t i, Rule r, std::string msg) {
    report.violations.push_back({i, r, std::move(msg)});
  };

  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const MdtNode& n = nodes[i];
    const bool null_rel = n.logical_rel == LogicalRel::Null;
    if (null_rel && n.triplets.size() > 1)
      violate(i, Rule::LogicalRelMismatch,
              "node holds " + std::to_string(n.triplets.size()) + " triplets but logical_rel is null");
    if (!null_rel && n.triplets.size() <= 1)
      violate(i, Rule::LogicalRelMismatch,
              "node holds " + std::to_string(n.triplets.size()) + " triplet(s) but logical_rel is " +
                  std::string(to_string(n.logical_rel)));
    if (n.role == Role::Condition && n.triplets.empty())
      violate(i, Rule::EmptyCondition, "condition node without triplets");
    for (const Triplet& t : n.triplets) {
      if (t.subject.empty() || t.object.empty())
        violate(i, Rule::EmptyTripletField, "triplet with empty subject or object");
      if (!parse_relation(t.relation)) {
        Violation v{i, Rule::UnknownRelation, "unknown relation label '" + t.relation + "'"};
        if (options.mode == ValidationMode::Strict)
          report.violations.push_back(std::move(v));
        else
          report.warnings.push_back(std::move(v));
      }
    }
  }

  // Structure: count open child slots while scanning the preorder sequence.
  std::vector<std::size_t> open;  // condition index per unfilled slot
  std::vector<std::size_t> depth_at;
  std::size_t depth = 0;
  bool structural_ok = true;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    std::size_t d = 1;
    if (i > 0) {
      if (open.empty()) {
        violate(i, Rule::LeftoverNodes,
                std::to_string(nodes.size() - i) + " node(s) remain after the root subtree is complete");
        structural_ok = false;
        break;
      }
      d = depth_at[open.back()] + 1;
      open.pop_back();
    }
    depth_at.push_back(d);
    depth = std::max(depth, d);
    if (nodes[i].role == Role::Condition) {
      open.push_back(i);
      open.push_back(i);
    }
  }
  if (structural_ok && !open.empty()) {
    violate(open.back(), Rule::PrematureExhaustion, "condition node is missing a child");
    structural_ok = false;
  }

  if (structural_ok && options.dataset_conformance && depth < 2)
    report.warnings.push_back({0, Rule::ShallowTree, "tree depth " + std::to_string(depth) + " is below 2"});
  return report;
}

Mdt Mdt::from_preorder(std::vector<MdtNode> nodes) {
  if (nodes.empty()) throw MalformedInput("empty preorder sequence");
  Mdt t;
  const std::size_t n = nodes.size();
  t.left_.assign(n, npos);
  t.right_.assign(n, npos);
  std::vector<std::size_t> level(n, 1);
  std::vector<Slot> open;
  for (std::size_t i = 0; i < n; ++i) {
    if (i > 0) {
      if (open.empty()) throw LeftoverNodes(i);
      const Slot s = open.back();
      open.pop_back();
      (s.left ? t.left_ : t.right_)[s.parent] = i;
      level[i] = level[s.parent] + 1;
    }
    if (nodes[i].role == Role::Condition) {
      open.push_back({i, false});
      open.push_back({i, true});
    }
  }
  if (!open.empty()) throw PrematureExhaustion(open.back().parent);
  t.depth_ = *std::max_element(level.begin(), level.end());
  t.nodes_ = std::move(nodes);
  return t;
}

std::vector<MdtNode> serialize_preorder(const Mdt& tree) {
  std::vector<MdtNode> out;
  out.reserve(tree.size());
  std::vector<std::size_t> stack{tree.root()};
  while (!stack.empty()) {
    const std::size_t i = stack.back();
    stack.pop_back();
    out.push_back(tree.node(i));
    if (!tree.is_leaf(i)) {
      stack.push_back(tree.right(i));
      stack.push_back(tree.left(i));
    }
  }
  if (out.size() != tree.size()) throw InvalidTree("tree links do not reach every node");
  return out;
}

std::vector<DecisionPath> decision_paths(const Mdt& tree) {
  std::vector<DecisionPath> paths;
  DecisionPath current;
  auto walk = [&](auto&& self, std::size_t i) -> void {
    if (tree.is_leaf(i)) {
      current.steps.push_back({tree.node(i), Branch::Terminal});
      paths.push_back(current);
      current.steps.pop_back();
      return;
    }
    current.steps.push_back({tree.node(i), Branch::Left});
    self(self, tree.left(i));
    current.steps.back().branch = Branch::Right;
    self(self, tree.right(i));
    current.steps.pop_back();
  };
  walk(walk, tree.root());
  return paths;
}

std::vector<Triplet> extract_triplets(std::span<const MdtNode> nodes, bool deduplicate) {
  std::vector<Triplet> out;
  std::set<Triplet> seen;
  for (const MdtNode& n : nodes)
    for (const Triplet& t : n.triplets)
      if (!deduplicate || seen.insert(t).second) out.push_back(t);
  return out;
}

std::vector<Triplet> extract_triplets(const Mdt& tree, bool deduplicate) {
  return extract_triplets(tree.preorder(), deduplicate);
}

}  // namespace text2mdt
