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

// Scores for triplet extraction, node grouping and tree assembly.
//
// Node contents are flattened into tuples of indivisible atoms (role label,
// one atom per triplet, logical relation label) and compared with an
// insert/delete edit distance. Node grouping ignores node order, so its
// distance is minimized over all orderings of the gold nodes.

#ifndef TEXT2MDT_METRICS_HPP
#define TEXT2MDT_METRICS_HPP

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "text2mdt/core.hpp"
#include "text2mdt/edit_distance.hpp"

namespace text2mdt {

enum class AtomKind { Role, Triplet, LogicalRel };

struct Atom {
  AtomKind kind = AtomKind::Triplet;
  std::string payload;

  friend bool operator==(const Atom&, const Atom&) = default;
};

using NodeTuple = std::vector<Atom>;

Atom role_atom(Role r);
Atom logical_rel_atom(LogicalRel l);
/// Fields joined with '|'; backslashes and bars inside fields are escaped so
/// atom equality is exactly triplet equality.
Atom triplet_atom(const Triplet& t);

/// (role?, canonical triplets..., logical_rel)
NodeTuple node_tuple(const MdtNode& node, bool include_role);

/// Concatenated tuples of all nodes in preorder, role always included.
std::vector<Atom> tree_tuple(const Mdt& tree);

enum class LrConvention {
  Similarity,  // 1 - ED / (len(pred) + len(gold)), in [0, 1], higher is better
  PaperRaw,    // ED / max(len(pred), len(gold)), lower is better
};

struct EvalConfig {
  /// Unset: excluded for node-grouping evaluation, included for breakdowns
  /// derived from predicted trees.
  std::optional<bool> ng_include_role;
  LrConvention lr_convention = LrConvention::Similarity;
  /// Gold node counts up to this value are searched exhaustively.
  std::size_t permutation_limit = 9;

  void check() const;
};

/// Gold node-grouping searches above this size are refused.
inline constexpr std::size_t kMaxPermutationNodes = 12;

struct Prf {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;

  friend bool operator==(const Prf&, const Prf&) = default;
};

/// Harmonic mean, 0 when both inputs are 0.
double f1_score(double precision, double recall);

/// Strict multiset matching; each gold instance absorbs at most one
/// prediction. Empty vs empty scores 1.
Prf triplet_prf(std::span<const Triplet> pred, std::span<const Triplet> gold);

/// Levenshtein ratio from a distance and the two tuple lengths.
double levenshtein_ratio(std::size_t distance, std::size_t pred_len, std::size_t gold_len,
                         LrConvention convention);

struct NgMatch {
  std::size_t distance = 0;
  std::size_t pred_length = 0;
  std::size_t gold_length = 0;
  /// Gold node order achieving `distance` (first in lexicographic order).
  std::vector<std::size_t> permutation;
};

/// Minimum over orderings of `gold` of the distance between the concatenated
/// prediction and the concatenated reordered gold. Exhaustive up to
/// `permutation_limit` gold nodes, branch-and-bound up to
/// kMaxPermutationNodes, PermutationLimitExceeded above.
NgMatch ng_match(std::span<const NodeTuple> pred, std::span<const NodeTuple> gold,
                 std::size_t permutation_limit = 9);

/// Node-grouping tuples for a node list; nodes without triplets are skipped.
std::vector<NodeTuple> ng_tuples(std::span<const MdtNode> nodes, bool include_role);

std::size_t ng_ed(std::span<const NodeTuple> pred_nodes, const Mdt& gold_tree, const EvalConfig& cfg = {});
double ng_lr(std::span<const NodeTuple> pred_nodes, const Mdt& gold_tree, const EvalConfig& cfg = {});

/// Node-list variants: both sides are converted with the same role setting.
std::size_t ng_ed(std::span<const MdtNode> pred_nodes, std::span<const MdtNode> gold_nodes,
                  const EvalConfig& cfg = {});
double ng_lr(std::span<const MdtNode> pred_nodes, std::span<const MdtNode> gold_nodes,
             const EvalConfig& cfg = {});

/// 1 iff same shape and every corresponding node has the same content.
int tree_acc(const Mdt& pred, const Mdt& gold);

/// Decision-path precision/recall/F1. A path matches when every step agrees
/// on node content and branch direction.
Prf dp_f1(const Mdt& pred, const Mdt& gold);

double tree_lr(const Mdt& pred, const Mdt& gold, const EvalConfig& cfg = {});

}  // namespace text2mdt

#endif  // TEXT2MDT_METRICS_HPP
