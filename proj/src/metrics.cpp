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

#include "text2mdt/metrics.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

namespace text2mdt {

namespace {

void append_escaped(std::string& out, const std::string& field) {
  for (char c : field) {
    if (c == '\\' || c == '|') out.push_back('\\');
    out.push_back(c);
  }
}

std::vector<Atom> concat(std::span<const NodeTuple> tuples, std::span<const std::size_t> order) {
  std::vector<Atom> out;
  for (std::size_t i : order) out.insert(out.end(), tuples[i].begin(), tuples[i].end());
  return out;
}

std::size_t total_length(std::span<const NodeTuple> tuples) {
  std::size_t n = 0;
  for (const auto& t : tuples) n += t.size();
  return n;
}

std::size_t abs_diff(std::size_t a, std::size_t b) { return a > b ? a - b : b - a; }

NgMatch exhaustive_match(const std::vector<Atom>& pred, std::span<const NodeTuple> gold) {
  NgMatch best;
  best.pred_length = pred.size();
  best.gold_length = total_length(gold);
  const std::size_t floor = abs_diff(best.pred_length, best.gold_length);

  std::vector<std::size_t> perm(gold.size());
  std::iota(perm.begin(), perm.end(), 0);
  bool first = true;
  do {
    const std::size_t d = edit_distance(pred, concat(gold, perm));
    if (first || d < best.distance) {
      best.distance = d;
      best.permutation = perm;
      first = false;
      if (d == floor) break;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

class BranchAndBound {
 public:
  BranchAndBound(const std::vector<Atom>& pred, std::span<const NodeTuple> gold)
      : pred_(pred), gold_(gold), used_(gold.size(), false) {
    remaining_ = total_length(gold);
    std::vector<std::size_t> identity(gold.size());
    std::iota(identity.begin(), identity.end(), 0);
    best_.pred_length = pred.size();
    best_.gold_length = remaining_;
    best_.distance = edit_distance(pred, concat(gold, identity));
    best_.permutation = identity;
    floor_ = abs_diff(best_.pred_length, best_.gold_length);
  }

  NgMatch run() {
    if (best_.distance > floor_) search(EditDistanceRow<Atom>(pred_));
    return best_;
  }

 private:
  void search(const EditDistanceRow<Atom>& row) {
    if (prefix_.size() == gold_.size()) {
      if (row.distance() < best_.distance) {
        best_.distance = row.distance();
        best_.permutation = prefix_;
      }
      return;
    }
    for (std::size_t g = 0; g < gold_.size(); ++g) {
      if (used_[g] || duplicate_of_unused_earlier(g)) continue;
      EditDistanceRow<Atom> next = row;
      for (const Atom& a : gold_[g]) next = next.extended(a);
      const std::size_t rest = remaining_ - gold_[g].size();
      if (next.lower_bound(rest) >= best_.distance) continue;
      used_[g] = true;
      prefix_.push_back(g);
      remaining_ = rest;
      search(next);
      remaining_ += gold_[g].size();
      prefix_.pop_back();
      used_[g] = false;
      if (best_.distance == floor_) return;
    }
  }

  // Identical unused nodes lead to identical subtrees; only the first is explored.
  bool duplicate_of_unused_earlier(std::size_t g) const {
    for (std::size_t h = 0; h < g; ++h)
      if (!used_[h] && gold_[h] == gold_[g]) return true;
    return false;
  }

  const std::vector<Atom>& pred_;
  std::span<const NodeTuple> gold_;
  std::vector<bool> used_;
  std::vector<std::size_t> prefix_;
  std::size_t remaining_ = 0;
  std::size_t floor_ = 0;
  NgMatch best_;
};

// Path keys: one string per atom, kind-tagged so that payloads of different
// kinds never collide.
std::set<std::vector<std::string>> path_keys(const Mdt& tree) {
  std::set<std::vector<std::string>> keys;
  for (const DecisionPath& p : decision_paths(tree)) {
    std::vector<std::string> key;
    for (const PathStep& s : p.steps) {
      for (const Atom& a : node_tuple(s.node, true))
        key.push_back(std::to_string(static_cast<int>(a.kind)) + a.payload);
      key.push_back("b" + std::string(to_string(s.branch)));
    }
    keys.insert(std::move(key));
  }
  return keys;
}

}  // namespace

Atom role_atom(Role r) { return {AtomKind::Role, std::string(to_string(r))}; }

Atom logical_rel_atom(LogicalRel l) { return {AtomKind::LogicalRel, std::string(to_string(l))}; }

Atom triplet_atom(const Triplet& t) {
  Atom a{AtomKind::Triplet, {}};
  append_escaped(a.payload, t.subject);
  a.payload.push_back('|');
  append_escaped(a.payload, t.relation);
  a.payload.push_back('|');
  append_escaped(a.payload, t.object);
  return a;
}

NodeTuple node_tuple(const MdtNode& node, bool include_role) {
  NodeTuple out;
  out.reserve(node.triplets.size() + 2);
  if (include_role) out.push_back(role_atom(node.role));
  for (const Triplet& t : canonical_triplets(node)) out.push_back(triplet_atom(t));
  out.push_back(logical_rel_atom(node.logical_rel));
  return out;
}

std::vector<Atom> tree_tuple(const Mdt& tree) {
  std::vector<Atom> out;
  for (const MdtNode& n : tree.preorder()) {
    NodeTuple t = node_tuple(n, true);
    out.insert(out.end(), t.begin(), t.end());
  }
  return out;
}

void EvalConfig::check() const {
  if (permutation_limit < 1) throw MalformedInput("permutation_limit must be at least 1");
}

double f1_score(double precision, double recall) {
  if (precision + recall == 0.0) return 0.0;
  return 2.0 * precision * recall / (precision + recall);
}

Prf triplet_prf(std::span<const Triplet> pred, std::span<const Triplet> gold) {
  if (pred.empty() && gold.empty()) return {1.0, 1.0, 1.0};
  std::map<Triplet, std::size_t> remaining;
  for (const Triplet& t : gold) ++remaining[t];
  std::size_t matched = 0;
  for (const Triplet& t : pred) {
    auto it = remaining.find(t);
    if (it != remaining.end() && it->second > 0) {
      --it->second;
      ++matched;
    }
  }
  Prf s;
  s.precision = pred.empty() ? 0.0 : static_cast<double>(matched) / static_cast<double>(pred.size());
  s.recall = gold.empty() ? 0.0 : static_cast<double>(matched) / static_cast<double>(gold.size());
  s.f1 = f1_score(s.precision, s.recall);
  return s;
}

double levenshtein_ratio(std::size_t distance, std::size_t pred_len, std::size_t gold_len,
                         LrConvention convention) {
  if (pred_len == 0 && gold_len == 0) return convention == LrConvention::Similarity ? 1.0 : 0.0;
  const auto d = static_cast<double>(distance);
  if (convention == LrConvention::Similarity) return 1.0 - d / static_cast<double>(pred_len + gold_len);
  return d / static_cast<double>(std::max(pred_len, gold_len));
}

NgMatch ng_match(std::span<const NodeTuple> pred, std::span<const NodeTuple> gold,
                 std::size_t permutation_limit) {
  if (permutation_limit < 1) throw MalformedInput("permutation_limit must be at least 1");
  if (gold.size() > kMaxPermutationNodes)
    throw PermutationLimitExceeded("node grouping with " + std::to_string(gold.size()) +
                                   " gold nodes exceeds the search limit of " +
                                   std::to_string(kMaxPermutationNodes));
  std::vector<std::size_t> pred_order(pred.size());
  std::iota(pred_order.begin(), pred_order.end(), 0);
  const std::vector<Atom> flat = concat(pred, pred_order);
  if (gold.size() <= permutation_limit) return exhaustive_match(flat, gold);
  return BranchAndBound(flat, gold).run();
}

std::vector<NodeTuple> ng_tuples(std::span<const MdtNode> nodes, bool include_role) {
  std::vector<NodeTuple> out;
  for (const MdtNode& n : nodes)
    if (!n.triplets.empty()) out.push_back(node_tuple(n, include_role));
  return out;
}

std::size_t ng_ed(std::span<const NodeTuple> pred_nodes, const Mdt& gold_tree, const EvalConfig& cfg) {
  cfg.check();
  const auto gold = ng_tuples(gold_tree.preorder(), cfg.ng_include_role.value_or(false));
  return ng_match(pred_nodes, gold, cfg.permutation_limit).distance;
}

double ng_lr(std::span<const NodeTuple> pred_nodes, const Mdt& gold_tree, const EvalConfig& cfg) {
  cfg.check();
  const auto gold = ng_tuples(gold_tree.preorder(), cfg.ng_include_role.value_or(false));
  const NgMatch m = ng_match(pred_nodes, gold, cfg.permutation_limit);
  return levenshtein_ratio(m.distance, m.pred_length, m.gold_length, cfg.lr_convention);
}

std::size_t ng_ed(std::span<const MdtNode> pred_nodes, std::span<const MdtNode> gold_nodes,
                  const EvalConfig& cfg) {
  cfg.check();
  const bool role = cfg.ng_include_role.value_or(false);
  return ng_match(ng_tuples(pred_nodes, role), ng_tuples(gold_nodes, role), cfg.permutation_limit).distance;
}

double ng_lr(std::span<const MdtNode> pred_nodes, std::span<const MdtNode> gold_nodes,
             const EvalConfig& cfg) {
  cfg.check();
  const bool role = cfg.ng_include_role.value_or(false);
  const NgMatch m = ng_match(ng_tuples(pred_nodes, role), ng_tuples(gold_nodes, role), cfg.permutation_limit);
  return levenshtein_ratio(m.distance, m.pred_length, m.gold_length, cfg.lr_convention);
}

int tree_acc(const Mdt& pred, const Mdt& gold) {
  if (pred.size() != gold.size()) return 0;
  // Equal role sequences in preorder imply equal shapes.
  for (std::size_t i = 0; i < pred.size(); ++i)
    if (!same_content(pred.node(i), gold.node(i))) return 0;
  return 1;
}

Prf dp_f1(const Mdt& pred, const Mdt& gold) {
  const auto pred_keys = path_keys(pred);
  const auto gold_keys = path_keys(gold);
  std::size_t matched = 0;
  for (const auto& k : pred_keys) matched += gold_keys.count(k);
  Prf s;
  s.precision = static_cast<double>(matched) / static_cast<double>(pred_keys.size());
  s.recall = static_cast<double>(matched) / static_cast<double>(gold_keys.size());
  s.f1 = f1_score(s.precision, s.recall);
  return s;
}

double tree_lr(const Mdt& pred, const Mdt& gold, const EvalConfig& cfg) {
  const auto p = tree_tuple(pred);
  const auto g = tree_tuple(gold);
  return levenshtein_ratio(edit_distance(p, g), p.size(), g.size(), cfg.lr_convention);
}

}  // namespace text2mdt
