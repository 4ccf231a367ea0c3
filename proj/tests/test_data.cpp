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

#include <algorithm>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "support/generators.hpp"
#include "text2mdt/data.hpp"
#include "text2mdt/io.hpp"

using namespace text2mdt;
using namespace text2mdt::testing;

namespace {

const std::string kFixtures = TEXT2MDT_FIXTURES;

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

LoadResult read_string(const std::string& s, ValidationMode mode = ValidationMode::Strict, bool raise = true) {
  std::istringstream in(s);
  return read_dataset(in, mode, raise);
}

template <typename T>
std::vector<T> sorted(std::vector<T> v) {
  std::sort(v.begin(), v.end());
  return v;
}

bool operator<(const NodeGroup& a, const NodeGroup& b) {
  return std::tie(a.triplets, a.logical_rel) < std::tie(b.triplets, b.logical_rel);
}

}  // namespace

TEST_CASE("load the sample fixture") {
  const LoadResult res = load_dataset(kFixtures + "/sample.jsonl");
  CHECK(res.records.size() == 3);
  CHECK(res.violations.empty());
  CHECK(res.records[0].id == "r1");
  CHECK(res.records[1].tree.size() == 5);
  CHECK(res.unmapped_fields.empty());
}

TEST_CASE("load errors") {
  CHECK_THROWS_AS(load_dataset(kFixtures + "/corrupted.jsonl"), ValidationError);
  const LoadResult lenient = load_dataset(kFixtures + "/corrupted.jsonl", ValidationMode::Lenient);
  REQUIRE_FALSE(lenient.violations.empty());
  CHECK(lenient.violations[0].record_id == "c1");
  CHECK(lenient.violations[0].violation.rule == Rule::PrematureExhaustion);

  CHECK_THROWS_AS(load_dataset(kFixtures + "/does-not-exist.jsonl"), ParseError);
  CHECK_THROWS_AS(read_string("{\"id\": \"a\", \"text\": "), ParseError);
  CHECK_THROWS_AS(read_string(R"({"id":"a","tree":[]})"), SchemaError);
}

TEST_CASE("unknown relation labels") {
  const std::string rec =
      R"({"id":"a","text":"t","tree":[{"role":"D","triples":[["x","副作用","y"]],"logic_rel":"null"}]})";
  CHECK_THROWS_AS(read_string(rec), ValidationError);
  const LoadResult lenient = read_string(rec, ValidationMode::Lenient);
  CHECK(lenient.violations.empty());
  CHECK(std::any_of(lenient.warnings.begin(), lenient.warnings.end(),
                    [](const RecordIssue& i) { return i.violation.rule == Rule::UnknownRelation; }));
  CHECK(lenient.records[0].tree[0].triplets[0].relation == "副作用");
}

TEST_CASE("tolerant reader") {
  const std::string alt =
      R"([{"text":"t","tree":[{"role":"D","triplets":[{"subject":"x","relation":"clinical_feature","object":"y"}],)"
      R"("logical_rel":"null","extra":1}]}])";
  CHECK_THROWS_AS(read_string(alt), SchemaError);
  const LoadResult res = read_string(alt, ValidationMode::Lenient);
  REQUIRE(res.records.size() == 1);
  CHECK(res.records[0].id == "record-0");
  CHECK(res.records[0].tree[0].triplets[0].object == "y");
  CHECK(res.unmapped_fields.size() == 1);
}

TEST_CASE("record-level checks") {
  const std::string dup = R"({"id":"a","text":"t","tree":[{"role":"D","triples":[],"logic_rel":"null"}]})"
                          "\n"
                          R"({"id":"a","text":"","tree":[{"role":"D","triples":[],"logic_rel":"null"}]})";
  const LoadResult res = read_string(dup, ValidationMode::Strict, false);
  auto count = [&](Rule r) {
    return std::count_if(res.violations.begin(), res.violations.end(),
                         [&](const RecordIssue& i) { return i.violation.rule == r; });
  };
  CHECK(count(Rule::DuplicateId) == 1);
  CHECK(count(Rule::EmptyText) == 1);
}

TEST_CASE("save then load is the identity and the writer is byte-stable") {
  const std::string original = slurp(kFixtures + "/sample.jsonl");
  const LoadResult res = read_string(original);
  std::ostringstream out;
  write_dataset(out, res.records);
  CHECK(out.str() == original);

  Rng rng(3);
  const auto records = random_records(rng, 100);
  std::ostringstream a;
  write_dataset(a, records);
  const LoadResult back = read_string(a.str());
  CHECK(back.records == records);
  std::ostringstream b;
  write_dataset(b, back.records);
  CHECK(a.str() == b.str());
}

TEST_CASE("stats on the sample fixture") {
  const CorpusStats s = compute_stats(load_dataset(kFixtures + "/sample.jsonl").records);
  CHECK(s.record_count == 3);
  CHECK(s.depth_histogram == std::map<std::size_t, std::size_t>{{2, 1}, {3, 2}});
  const std::map<std::string, std::size_t> rel{{"clinical_feature", 6}, {"therapeutic_drug", 5},
                                               {"usage_or_dosage", 1},  {"basic_information", 1},
                                               {"forbidden_drug", 1},   {"medical_option", 1}};
  CHECK(s.relation_histogram == rel);
  CHECK(s.triplet_count == 15);
  CHECK(s.node_counts == NodeCounts{12, 7, 5, 2, 1, 9});
  CHECK(s.placeholder_count == 1);
  CHECK(s.all_nodes.total == 13);
  CHECK(s.avg_nodes_per_tree == doctest::Approx(4.0));
  CHECK(s.avg_triplets_per_tree == doctest::Approx(5.0));
  CHECK(s.seo_record_count == 3);
}

TEST_CASE("stats totals are consistent") {
  Rng rng(5);
  const auto records = random_records(rng, 300);
  const CorpusStats s = compute_stats(records);
  std::size_t depth_total = 0, rel_total = 0;
  for (const auto& [d, c] : s.depth_histogram) depth_total += c;
  for (const auto& [r, c] : s.relation_histogram) rel_total += c;
  CHECK(depth_total == s.record_count);
  CHECK(rel_total == s.triplet_count);
  for (const NodeCounts* c : {&s.node_counts, &s.all_nodes}) {
    CHECK(c->decision + c->condition == c->total);
    CHECK(c->and_rel + c->or_rel + c->null_rel == c->total);
  }
  CHECK(s.all_nodes.total == s.node_counts.total + s.placeholder_count);
}

TEST_CASE("single entity overlap") {
  const Triplet a{"x", "clinical_feature", "y"}, b{"y", "therapeutic_drug", "z"}, c{"p", "clinical_feature", "q"};
  CHECK(has_single_entity_overlap(std::vector<Triplet>{a, b}));
  CHECK_FALSE(has_single_entity_overlap(std::vector<Triplet>{a, c}));
  CHECK_FALSE(has_single_entity_overlap(std::vector<Triplet>{a, a}));
  // Same entity pair under another relation overlaps on both ends.
  CHECK_FALSE(has_single_entity_overlap(std::vector<Triplet>{a, {"x", "therapeutic_drug", "y"}}));
}

TEST_CASE("cohens_kappa") {
  const std::vector<std::string> same{"a", "b", "a", "c"};
  CHECK(cohens_kappa(same, same) == 1.0);
  const std::vector<std::string> constant(5, "a");
  CHECK(cohens_kappa(constant, constant) == 1.0);

  // Confusion (20, 5; 10, 15).
  std::vector<std::string> r1, r2;
  auto add = [&](int n, const char* x, const char* y) {
    for (int i = 0; i < n; ++i) {
      r1.emplace_back(x);
      r2.emplace_back(y);
    }
  };
  add(20, "yes", "yes");
  add(5, "yes", "no");
  add(10, "no", "yes");
  add(15, "no", "no");
  const double n = 50.0;
  const double p_o = (20 + 15) / n;
  const double p_e = (25 / n) * (30 / n) + (25 / n) * (20 / n);
  CHECK(cohens_kappa(r1, r2) == doctest::Approx((p_o - p_e) / (1 - p_e)));
  CHECK(cohens_kappa(r1, r2) == doctest::Approx(0.4));

  Rng rng(6);
  std::vector<std::string> u1, u2;
  for (int i = 0; i < 20000; ++i) {
    u1.push_back(std::to_string(uniform(rng, 0, 2)));
    u2.push_back(std::to_string(uniform(rng, 0, 2)));
  }
  CHECK(std::abs(cohens_kappa(u1, u2)) < 0.03);

  CHECK_THROWS_AS(cohens_kappa(std::vector<std::string>{"a"}, std::vector<std::string>{}), LengthMismatch);
  CHECK_THROWS_AS(cohens_kappa(std::vector<std::string>{}, std::vector<std::string>{}), EmptyInput);
}

TEST_CASE("build_subtasks without augmentation keeps the original order") {
  const auto records = load_dataset(kFixtures + "/sample.jsonl").records;
  const SubtaskSets sets = build_subtasks(records, 0, 1);
  CHECK(sets.te.size() == 3);
  CHECK(sets.ng.size() == 3);
  CHECK(sets.ta.size() == 3);
  for (std::size_t i = 0; i < records.size(); ++i) {
    CHECK(sets.te[i].target_triplets == extract_triplets(std::span<const MdtNode>(records[i].tree)));
    CHECK(sets.ng[i].input_triplets == sets.te[i].target_triplets);
    CHECK(sets.ta[i].target_tree == records[i].tree);
    REQUIRE(sets.ta[i].input_nodes.size() == records[i].tree.size());
    for (std::size_t k = 0; k < records[i].tree.size(); ++k)
      CHECK(sets.ta[i].input_nodes[k].triplets == records[i].tree[k].triplets);
  }
}

TEST_CASE("augmented copies are permutations of the original") {
  Rng rng(7);
  const auto records = random_records(rng, 50);
  const SubtaskSets sets = build_subtasks(records, 4, 99);
  REQUIRE(sets.ng.size() == 200);
  REQUIRE(sets.ta.size() == 200);
  for (std::size_t i = 0; i < sets.ng.size(); ++i) {
    const DatasetRecord& src = records[i / 4];
    CHECK(sets.ng[i].source_id == src.id);
    CHECK(sorted(sets.ng[i].input_triplets) == sorted(extract_triplets(std::span<const MdtNode>(src.tree))));
    std::vector<NodeGroup> nodes;
    for (const MdtNode& n : src.tree) nodes.push_back({n.triplets, n.logical_rel});
    CHECK(sorted(sets.ta[i].input_nodes) == sorted(nodes));
    CHECK(sets.ta[i].target_tree == src.tree);
    std::vector<NodeGroup> groups;
    for (const MdtNode& n : src.tree)
      if (!n.triplets.empty()) groups.push_back({n.triplets, n.logical_rel});
    CHECK(sets.ng[i].target_groups == groups);
  }
}

TEST_CASE("augmentation is deterministic under a seed") {
  Rng rng(8);
  const auto records = random_records(rng, 40);
  auto dump = [&](std::uint64_t seed) {
    const SubtaskSets s = build_subtasks(records, 4, seed);
    std::ostringstream os;
    write_subtask_records(os, s.ng);
    write_subtask_records(os, s.ta);
    return os.str();
  };
  CHECK(dump(5) == dump(5));
  CHECK(dump(5) != dump(6));
  CHECK(shuffled_order(10, 1, "k", 0) == std::vector<std::size_t>{0, 1, 2, 3, 4, 5, 6, 7, 8, 9});
  auto p = shuffled_order(10, 1, "k", 2);
  CHECK(sorted(p) == std::vector<std::size_t>{0, 1, 2, 3, 4, 5, 6, 7, 8, 9});
}
