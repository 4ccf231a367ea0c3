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

#ifndef TEXT2MDT_EVALUATE_HPP
#define TEXT2MDT_EVALUATE_HPP

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "text2mdt/data.hpp"
#include "text2mdt/metrics.hpp"

namespace text2mdt {

struct RecordScores {
  std::string id;
  /// The predicted preorder sequence does not reconstruct; tree metrics take
  /// their worst value.
  bool invalid_prediction = false;
  int tree_acc = 0;
  Prf decision_path;
  double tree_lr = 0.0;
  // Breakdown only.
  std::optional<Prf> triplet;
  std::optional<double> ng_lr;
};

/// Macro averages over records plus the per-record rows, in gold order.
struct EvalReport {
  std::size_t record_count = 0;
  std::size_t invalid_predictions = 0;
  double tree_acc = 0.0;
  Prf decision_path;
  double tree_lr = 0.0;
  std::optional<Prf> triplet;
  std::optional<double> ng_lr;
  std::vector<RecordScores> per_record;
};

/// Scores predicted trees against gold trees matched by record id.
/// Throws IdMismatch when the id sets differ or repeat, InvalidTree when a
/// gold tree does not reconstruct. With `breakdown`, triplet scores and NG_LR
/// are also derived from the predicted trees.
EvalReport evaluate(std::span<const DatasetRecord> pred, std::span<const DatasetRecord> gold,
                    const EvalConfig& cfg = {}, bool breakdown = false);

}  // namespace text2mdt

#endif  // TEXT2MDT_EVALUATE_HPP
