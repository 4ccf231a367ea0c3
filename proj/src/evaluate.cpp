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

#include "text2mdt/evaluate.hpp"

#include <map>

namespace text2mdt {

EvalReport evaluate(std::span<const DatasetRecord> pred, std::span<const DatasetRecord> gold,
                    const EvalConfig& cfg, bool breakdown) {
  cfg.check();
  std::map<std::string, const DatasetRecord*> by_id;
  for (const DatasetRecord& p : pred)
    if (!by_id.emplace(p.id, &p).second) throw IdMismatch("duplicate predicted record id '" + p.id + "'");
  if (pred.size() != gold.size())
    throw IdMismatch("prediction has " + std::to_string(pred.size()) + " records, gold has " +
                     std::to_string(gold.size()));

  EvalConfig ng_cfg = cfg;
  ng_cfg.ng_include_role = cfg.ng_include_role.value_or(true);

  EvalReport report;
  Prf triplet_sum;
  double ng_sum = 0.0;
  std::map<std::string, bool> gold_seen;
  for (const DatasetRecord& g : gold) {
    if (!gold_seen.emplace(g.id, true).second) throw IdMismatch("duplicate gold record id '" + g.id + "'");
    auto it = by_id.find(g.id);
    if (it == by_id.end()) throw IdMismatch("no prediction for gold record '" + g.id + "'");
    const DatasetRecord& p = *it->second;

    const Mdt gold_tree = parse_preorder(std::span<const MdtNode>(g.tree));
    RecordScores row;
    row.id = g.id;
    try {
      const Mdt pred_tree = parse_preorder(std::span<const MdtNode>(p.tree));
      row.tree_acc = tree_acc(pred_tree, gold_tree);
      row.decision_path = dp_f1(pred_tree, gold_tree);
      row.tree_lr = tree_lr(pred_tree, gold_tree, cfg);
    } catch (const Error&) {
      row.invalid_prediction = true;
      // Worst value under either convention.
      row.tree_lr = cfg.lr_convention == LrConvention::Similarity ? 0.0 : 1.0;
      ++report.invalid_predictions;
    }

    if (breakdown) {
      row.triplet = triplet_prf(extract_triplets(std::span<const MdtNode>(p.tree)),
                                extract_triplets(std::span<const MdtNode>(g.tree)));
      row.ng_lr = ng_lr(std::span<const MdtNode>(p.tree), std::span<const MdtNode>(g.tree), ng_cfg);
      triplet_sum.precision += row.triplet->precision;
      triplet_sum.recall += row.triplet->recall;
      triplet_sum.f1 += row.triplet->f1;
      ng_sum += *row.ng_lr;
    }

    report.tree_acc += row.tree_acc;
    report.decision_path.precision += row.decision_path.precision;
    report.decision_path.recall += row.decision_path.recall;
    report.decision_path.f1 += row.decision_path.f1;
    report.tree_lr += row.tree_lr;
    report.per_record.push_back(std::move(row));
  }

  report.record_count = gold.size();
  if (report.record_count > 0) {
    const auto n = static_cast<double>(report.record_count);
    report.tree_acc /= n;
    report.decision_path.precision /= n;
    report.decision_path.recall /= n;
    report.decision_path.f1 /= n;
    report.tree_lr /= n;
    if (breakdown) {
      report.triplet = Prf{triplet_sum.precision / n, triplet_sum.recall / n, triplet_sum.f1 / n};
      report.ng_lr = ng_sum / n;
    }
  }
  return report;
}

}  // namespace text2mdt
