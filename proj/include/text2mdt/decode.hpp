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

// Table-filling scores and the decoders that turn them into structure.
//
// Every pipeline step labels the cells of a square table: token pairs for
// triplet extraction, triplet pairs for node grouping, node pairs for tree
// assembly. Scores come from a biaffine layer
//
//   score[k] = h1' U_k h2 + W_k' [h1; h2]
//
// and the decoders below consume the resulting per-cell distributions.

#ifndef TEXT2MDT_DECODE_HPP
#define TEXT2MDT_DECODE_HPP

#include <Eigen/Dense>
#include <cmath>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "text2mdt/core.hpp"

namespace text2mdt {

template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// Numerically stable softmax of a score vector.
template <typename Derived>
VectorX<typename Derived::Scalar> softmax(const Eigen::MatrixBase<Derived>& scores) {
  using Scalar = typename Derived::Scalar;
  const Scalar top = scores.maxCoeff();
  VectorX<Scalar> e = (scores.array() - top).exp().matrix();
  return e / e.sum();
}

/// n x n cells, each a distribution over k labels. Cell (i, j) is row
/// i * n + j of a row-major (n*n) x k matrix.
template <typename Scalar>
class PairLabelTable {
 public:
  using Cells = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

  /// Throws DimensionMismatch on shape errors and NormalizationError when a
  /// cell is negative, non-finite, or does not sum to 1 within `tolerance`.
  PairLabelTable(Eigen::Index n, Eigen::Index k, Cells probs, Scalar tolerance = Scalar(1e-6))
      : n_(n), k_(k), probs_(std::move(probs)) {
    if (n < 1 || k < 1) throw DimensionMismatch("table needs n >= 1 and k >= 1");
    if (probs_.rows() != n * n || probs_.cols() != k)
      throw DimensionMismatch("table data is " + std::to_string(probs_.rows()) + "x" +
                              std::to_string(probs_.cols()) + ", expected " + std::to_string(n * n) + "x" +
                              std::to_string(k));
    for (Eigen::Index r = 0; r < probs_.rows(); ++r) {
      const auto row = probs_.row(r);
      if (!row.allFinite() || (row.array() < Scalar(0)).any() || std::abs(row.sum() - Scalar(1)) > tolerance)
        throw NormalizationError("cell (" + std::to_string(r / n) + ", " + std::to_string(r % n) +
                                 ") is not a probability distribution");
    }
  }

  /// Applies a softmax to every cell of raw scores.
  static PairLabelTable from_scores(Eigen::Index n, Eigen::Index k, const Cells& scores) {
    if (scores.rows() != n * n || scores.cols() != k) throw DimensionMismatch("score table shape mismatch");
    Cells p(scores.rows(), scores.cols());
    for (Eigen::Index r = 0; r < scores.rows(); ++r) p.row(r) = softmax(scores.row(r).transpose()).transpose();
    return PairLabelTable(n, k, std::move(p));
  }

  Eigen::Index size() const noexcept { return n_; }
  Eigen::Index labels() const noexcept { return k_; }
  const Cells& cells() const noexcept { return probs_; }

  auto cell(Eigen::Index i, Eigen::Index j) const { return probs_.row(i * n_ + j); }
  Scalar prob(Eigen::Index i, Eigen::Index j, Eigen::Index label) const { return probs_(i * n_ + j, label); }

  /// Highest-probability label; ties go to the smaller label index.
  Eigen::Index argmax(Eigen::Index i, Eigen::Index j) const {
    Eigen::Index best = 0;
    cell(i, j).maxCoeff(&best);
    return best;
  }

 private:
  Eigen::Index n_;
  Eigen::Index k_;
  Cells probs_;
};

/// Bilinear tensor U (d x K x d, stored as K slices of d x d) and linear map
/// W (2d x K).
template <typename Scalar>
struct BiaffineParams {
  std::vector<MatrixX<Scalar>> bilinear;
  MatrixX<Scalar> linear;

  BiaffineParams(std::vector<MatrixX<Scalar>> u, MatrixX<Scalar> w) : bilinear(std::move(u)), linear(std::move(w)) {
    if (bilinear.empty()) throw DimensionMismatch("biaffine layer needs at least one label");
    const Eigen::Index d = bilinear.front().rows();
    for (const auto& slice : bilinear)
      if (slice.rows() != d || slice.cols() != d) throw DimensionMismatch("bilinear slices must be d x d");
    if (linear.rows() != 2 * d || linear.cols() != labels())
      throw DimensionMismatch("linear map must be 2d x K");
  }

  static BiaffineParams zeros(Eigen::Index d, Eigen::Index k) {
    return BiaffineParams(std::vector<MatrixX<Scalar>>(k, MatrixX<Scalar>::Zero(d, d)),
                          MatrixX<Scalar>::Zero(2 * d, k));
  }

  Eigen::Index dim() const { return bilinear.front().rows(); }
  Eigen::Index labels() const { return static_cast<Eigen::Index>(bilinear.size()); }
};

/// Raw per-label scores for one pair; apply softmax() for probabilities.
template <typename D1, typename D2, typename Scalar = typename D1::Scalar>
VectorX<Scalar> biaffine_score(const Eigen::MatrixBase<D1>& h1, const Eigen::MatrixBase<D2>& h2,
                               const BiaffineParams<Scalar>& params) {
  const Eigen::Index d = params.dim();
  if (h1.size() != d || h2.size() != d)
    throw DimensionMismatch("feature vectors must have dimension " + std::to_string(d));
  VectorX<Scalar> joined(2 * d);
  joined << h1, h2;
  VectorX<Scalar> out = params.linear.transpose() * joined;
  for (Eigen::Index k = 0; k < params.labels(); ++k) out(k) += h1.dot(params.bilinear[k] * h2);
  return out;
}

using LabelMatrix = Eigen::Matrix<Eigen::Index, Eigen::Dynamic, Eigen::Dynamic>;

/// Mean cross-entropy over all n^2 cells; probabilities are clamped to 1e-12.
template <typename Scalar>
Scalar table_loss(const PairLabelTable<Scalar>& table, const LabelMatrix& gold) {
  const Eigen::Index n = table.size();
  if (gold.rows() != n || gold.cols() != n) throw DimensionMismatch("gold label matrix must be n x n");
  Scalar total(0);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      const Eigen::Index y = gold(i, j);
      if (y < 0 || y >= table.labels()) throw DimensionMismatch("gold label index out of range");
      total -= std::log(std::max(table.prob(i, j, y), Scalar(1e-12)));
    }
  return total / static_cast<Scalar>(n * n);
}

// ---------------------------------------------------------------------------
// Decoders (double-precision tables)

using ProbTable = PairLabelTable<double>;

enum class LabelKind { Entity, Relation, Null };

/// Label vocabulary of a token-pair table.
struct TripletLabelSchema {
  std::vector<std::string> names;
  std::vector<LabelKind> kinds;
};

struct EntitySpan {
  std::size_t begin = 0;  // inclusive token index
  std::size_t end = 0;    // inclusive token index
  std::string label;
  double prob = 0.0;

  friend bool operator==(const EntitySpan&, const EntitySpan&) = default;
};

struct TripletDecoding {
  std::vector<EntitySpan> spans;
  std::vector<Triplet> triplets;
};

/// Greedy token-pair decode. Cells (i <= j) whose argmax is an entity label
/// become spans [i..j]; cells (i != j) whose argmax is a relation label and
/// whose indices both start a span yield (head span, relation, tail span).
/// When several spans share a start token the first in (prob desc, i, j)
/// order is used. Span text joins tokens with `joiner`.
TripletDecoding decode_triplet_table(const ProbTable& table, const TripletLabelSchema& schema,
                                     std::span<const std::string> tokens, std::string_view joiner = "");

/// Label order of node-grouping tables.
enum class NgLabel : Eigen::Index { And = 0, Or = 1, Null = 2 };
/// Label order of tree-assembly edge tables: cell (p, c) rates c as the
/// left/right child of p.
enum class EdgeLabel : Eigen::Index { LeftChild = 0, RightChild = 1, None = 2 };
/// Column order of role probability matrices.
enum class RoleColumn : Eigen::Index { Condition = 0, Decision = 1 };

struct TripletGroup {
  std::vector<std::size_t> members;  // ascending triplet indices
  LogicalRel logical_rel = LogicalRel::Null;

  friend bool operator==(const TripletGroup&, const TripletGroup&) = default;
};

/// Score-ordered grouping of triplets into nodes. Each unordered pair takes
/// the argmax of the averaged (i, j) and (j, i) distributions; and/or links
/// are established in descending probability unless they would put and- and
/// or-links into one group. Groups are ordered by their smallest member.
std::vector<TripletGroup> decode_node_grouping(const ProbTable& pair_probs);

/// Attaches triplets to decoded groups.
std::vector<NodeGroup> materialize_groups(std::span<const TripletGroup> groups, std::span<const Triplet> triplets);

/// Assigns roles by argmax and accepts directed edges greedily by
/// probability (child unparented, parent a condition, slot free, no cycle).
/// Nodes without triplets are always decisions. In force mode, leftover
/// components are hung into free condition slots (promoting a decision node
/// if no slot exists) and remaining slots get empty decision placeholders;
/// otherwise an incomplete result raises DecodingIncomplete.
Mdt decode_tree_assembly(const MatrixX<double>& role_probs, const ProbTable& edge_probs,
                         std::span<const NodeGroup> nodes, bool force);

}  // namespace text2mdt

#endif  // TEXT2MDT_DECODE_HPP
