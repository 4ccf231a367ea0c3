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

#include "text2mdt/decode.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <set>

namespace text2mdt {

namespace {

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }

  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  /// Returns the new representative.
  std::size_t unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return a;
    if (b < a) std::swap(a, b);
    parent_[b] = a;
    return a;
  }

 private:
  std::vector<std::size_t> parent_;
};

struct ScoredPair {
  double prob;
  std::size_t i;
  std::size_t j;
  Eigen::Index label;
};

// prob desc, then i asc, j asc, label asc.
bool by_score(const ScoredPair& a, const ScoredPair& b) {
  if (a.prob != b.prob) return a.prob > b.prob;
  if (a.i != b.i) return a.i < b.i;
  if (a.j != b.j) return a.j < b.j;
  return a.label < b.label;
}

template <typename Row>
Eigen::Index argmax_of(const Row& row) {
  Eigen::Index best = 0;
  row.maxCoeff(&best);
  return best;
}

std::string join_tokens(std::span<const std::string> tokens, std::size_t begin, std::size_t end,
                        std::string_view joiner) {
  std::string out;
  for (std::size_t t = begin; t <= end; ++t) {
    if (t > begin) out.append(joiner);
    out.append(tokens[t]);
  }
  return out;
}

}  // namespace

TripletDecoding decode_triplet_table(const ProbTable& table, const TripletLabelSchema& schema,
                                     std::span<const std::string> tokens, std::string_view joiner) {
  const auto n = static_cast<std::size_t>(table.size());
  const auto k = static_cast<std::size_t>(table.labels());
  if (schema.names.size() != k || schema.kinds.size() != k)
    throw DimensionMismatch("label schema has " + std::to_string(schema.names.size()) + " labels, table has " +
                            std::to_string(k));
  if (tokens.size() != n)
    throw DimensionMismatch("table covers " + std::to_string(n) + " tokens, got " + std::to_string(tokens.size()));

  std::vector<ScoredPair> entity_cells, relation_cells;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const Eigen::Index l = table.argmax(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      const double p = table.prob(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j), l);
      const LabelKind kind = schema.kinds[static_cast<std::size_t>(l)];
      if (kind == LabelKind::Entity && i <= j) entity_cells.push_back({p, i, j, l});
      if (kind == LabelKind::Relation && i != j) relation_cells.push_back({p, i, j, l});
    }
  std::sort(entity_cells.begin(), entity_cells.end(), by_score);
  std::sort(relation_cells.begin(), relation_cells.end(), by_score);

  TripletDecoding out;
  std::map<std::size_t, std::size_t> span_at_start;  // start token -> span index
  for (const ScoredPair& c : entity_cells) {
    out.spans.push_back({c.i, c.j, schema.names[static_cast<std::size_t>(c.label)], c.prob});
    span_at_start.emplace(c.i, out.spans.size() - 1);
  }

  std::set<Triplet> seen;
  for (const ScoredPair& c : relation_cells) {
    auto head = span_at_start.find(c.i);
    auto tail = span_at_start.find(c.j);
    if (head == span_at_start.end() || tail == span_at_start.end()) continue;
    const EntitySpan& h = out.spans[head->second];
    const EntitySpan& t = out.spans[tail->second];
    Triplet tr{join_tokens(tokens, h.begin, h.end, joiner), schema.names[static_cast<std::size_t>(c.label)],
               join_tokens(tokens, t.begin, t.end, joiner)};
    if (seen.insert(tr).second) out.triplets.push_back(std::move(tr));
  }
  return out;
}

std::vector<TripletGroup> decode_node_grouping(const ProbTable& pair_probs) {
  if (pair_probs.labels() != 3) throw DimensionMismatch("node grouping tables have exactly 3 labels");
  const auto n = static_cast<std::size_t>(pair_probs.size());

  std::vector<ScoredPair> links;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const Eigen::RowVectorXd avg = 0.5 * (pair_probs.cell(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) +
                                            pair_probs.cell(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)));
      const Eigen::Index l = argmax_of(avg);
      if (l != static_cast<Eigen::Index>(NgLabel::Null)) links.push_back({avg(l), i, j, l});
    }
  std::sort(links.begin(), links.end(), by_score);

  UnionFind uf(n);
  // Link label per component representative; absent for singletons.
  std::map<std::size_t, Eigen::Index> label_of;
  auto component_label = [&](std::size_t rep) -> std::optional<Eigen::Index> {
    auto it = label_of.find(rep);
    if (it == label_of.end()) return std::nullopt;
    return it->second;
  };

  for (const ScoredPair& link : links) {
    const std::size_t a = uf.find(link.i);
    const std::size_t b = uf.find(link.j);
    const auto la = component_label(a);
    const auto lb = component_label(b);
    if ((la && *la != link.label) || (lb && *lb != link.label)) continue;  // and/or conflict
    if (a == b) continue;
    label_of.erase(a);
    label_of.erase(b);
    label_of[uf.unite(a, b)] = link.label;
  }

  std::map<std::size_t, TripletGroup> by_rep;
  for (std::size_t i = 0; i < n; ++i) by_rep[uf.find(i)].members.push_back(i);
  std::vector<TripletGroup> groups;
  for (auto& [rep, g] : by_rep) {
    if (g.members.size() > 1) {
      g.logical_rel = label_of.at(rep) == static_cast<Eigen::Index>(NgLabel::And) ? LogicalRel::And : LogicalRel::Or;
    }
    groups.push_back(std::move(g));
  }
  // The union keeps the smallest index as representative, so map order is
  // already by smallest member.
  return groups;
}

std::vector<NodeGroup> materialize_groups(std::span<const TripletGroup> groups, std::span<const Triplet> triplets) {
  std::vector<NodeGroup> out;
  for (const TripletGroup& g : groups) {
    NodeGroup ng;
    ng.logical_rel = g.logical_rel;
    for (std::size_t m : g.members) {
      if (m >= triplets.size()) throw DimensionMismatch("group member out of range");
      ng.triplets.push_back(triplets[m]);
    }
    out.push_back(std::move(ng));
  }
  return out;
}

Mdt decode_tree_assembly(const MatrixX<double>& role_probs, const ProbTable& edge_probs,
                         std::span<const NodeGroup> nodes, bool force) {
  const std::size_t n = nodes.size();
  if (n == 0) throw MalformedInput("tree assembly needs at least one node");
  if (role_probs.rows() != static_cast<Eigen::Index>(n) || role_probs.cols() != 2)
    throw DimensionMismatch("role probabilities must be n x 2");
  if (edge_probs.size() != static_cast<Eigen::Index>(n) || edge_probs.labels() != 3)
    throw DimensionMismatch("edge table must be n x n x 3");
  for (Eigen::Index r = 0; r < role_probs.rows(); ++r) {
    const auto row = role_probs.row(r);
    if (!row.allFinite() || (row.array() < 0.0).any() || std::abs(row.sum() - 1.0) > 1e-6)
      throw NormalizationError("role probabilities of node " + std::to_string(r) + " do not sum to 1");
  }
  for (std::size_t i = 0; i < n; ++i) {
    const bool null_rel = nodes[i].logical_rel == LogicalRel::Null;
    if (null_rel != (nodes[i].triplets.size() <= 1))
      throw MalformedInput("node " + std::to_string(i) + " has a logical relation inconsistent with its triplets");
  }

  const auto C = static_cast<Eigen::Index>(RoleColumn::Condition);
  std::vector<Role> role(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto r = static_cast<Eigen::Index>(i);
    const bool cond = role_probs(r, C) >= role_probs(r, 1 - C) && !nodes[i].triplets.empty();
    role[i] = cond ? Role::Condition : Role::Decision;
  }

  constexpr std::size_t none = Mdt::npos;
  std::vector<std::size_t> parent(n, none), left(n, none), right(n, none);
  UnionFind uf(n);
  std::size_t accepted = 0;

  auto try_attach = [&](std::size_t p, std::size_t c, bool as_left) {
    if (p == c || parent[c] != none || role[p] != Role::Condition) return false;
    std::size_t& slot = as_left ? left[p] : right[p];
    if (slot != none || uf.find(p) == uf.find(c)) return false;
    slot = c;
    parent[c] = p;
    uf.unite(p, c);
    ++accepted;
    return true;
  };

  std::vector<ScoredPair> edges;
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t c = 0; c < n; ++c) {
      if (p == c) continue;
      const auto pi = static_cast<Eigen::Index>(p);
      const auto ci = static_cast<Eigen::Index>(c);
      const Eigen::Index l = edge_probs.argmax(pi, ci);
      if (l != static_cast<Eigen::Index>(EdgeLabel::None)) edges.push_back({edge_probs.prob(pi, ci, l), p, c, l});
    }
  std::sort(edges.begin(), edges.end(), by_score);
  for (const ScoredPair& e : edges) {
    if (accepted + 1 == n) break;
    try_attach(e.i, e.j, e.label == static_cast<Eigen::Index>(EdgeLabel::LeftChild));
  }

  auto roots = [&] {
    std::vector<std::size_t> r;
    for (std::size_t i = 0; i < n; ++i)
      if (parent[i] == none) r.push_back(i);
    return r;
  };

  if (force) {
    for (auto rs = roots(); rs.size() > 1; rs = roots()) {
      // Best free slot for another component's root.
      std::optional<ScoredPair> best;
      for (std::size_t p = 0; p < n; ++p) {
        if (role[p] != Role::Condition) continue;
        for (int side = 0; side < 2; ++side) {
          if ((side == 0 ? left[p] : right[p]) != none) continue;
          for (std::size_t r : rs) {
            if (uf.find(r) == uf.find(p)) continue;
            ScoredPair cand{edge_probs.prob(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(r), side), p, r,
                            side};
            if (!best || by_score(cand, *best)) best = cand;
          }
        }
      }
      if (best) {
        try_attach(best->i, best->j, best->label == 0);
        continue;
      }
      // No free slot anywhere: turn the most condition-like leaf with
      // content into a condition node.
      std::optional<std::size_t> promote;
      for (std::size_t i = 0; i < n; ++i) {
        if (role[i] != Role::Decision || nodes[i].triplets.empty()) continue;
        const auto ri = static_cast<Eigen::Index>(i);
        if (!promote || role_probs(ri, C) > role_probs(static_cast<Eigen::Index>(*promote), C)) promote = i;
      }
      if (!promote) throw DecodingIncomplete("no node with triplets can join the components", rs);
      role[*promote] = Role::Condition;
    }
  } else {
    const auto rs = roots();
    std::vector<std::size_t> offending;
    // The largest component keeps its root; ties go to the smaller index.
    std::map<std::size_t, std::size_t> comp_size;
    for (std::size_t i = 0; i < n; ++i) ++comp_size[uf.find(i)];
    std::size_t main_root = rs.front();
    for (std::size_t r : rs)
      if (comp_size[uf.find(r)] > comp_size[uf.find(main_root)]) main_root = r;
    for (std::size_t r : rs)
      if (r != main_root) offending.push_back(r);
    for (std::size_t i = 0; i < n; ++i)
      if (role[i] == Role::Condition && (left[i] == none || right[i] == none)) offending.push_back(i);
    if (!offending.empty()) {
      std::sort(offending.begin(), offending.end());
      offending.erase(std::unique(offending.begin(), offending.end()), offending.end());
      std::string msg = "tree assembly left nodes unconnected or slots empty:";
      for (std::size_t o : offending) msg += " " + std::to_string(o);
      throw DecodingIncomplete(msg, offending);
    }
  }

  std::vector<MdtNode> preorder;
  auto emit = [&](auto&& self, std::size_t i) -> void {
    if (i == none) {
      preorder.push_back(MdtNode{Role::Decision, {}, LogicalRel::Null});
      return;
    }
    preorder.push_back(MdtNode{role[i], nodes[i].triplets, nodes[i].logical_rel});
    if (role[i] == Role::Condition) {
      self(self, left[i]);
      self(self, right[i]);
    }
  };
  emit(emit, roots().front());
  return Mdt::from_preorder(std::move(preorder));
}

}  // namespace text2mdt
