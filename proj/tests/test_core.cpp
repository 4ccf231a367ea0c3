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
#include <map>

#include "doctest.h"
#include "support/generators.hpp"
#include "text2mdt/core.hpp"

using namespace text2mdt;
using namespace text2mdt::testing;

namespace {

Triplet t(const std::string& s, const std::string& o, const std::string& r = "clinical_feature") { return {s, r, o}; }

MdtNode cond(std::vector<Triplet> ts, LogicalRel l = LogicalRel::Null) { return {Role::Condition, std::move(ts), l}; }
MdtNode dec(std::vector<Triplet> ts = {}, LogicalRel l = LogicalRel::Null) {
  return {Role::Decision, std::move(ts), l};
}

bool has_rule(const ValidationReport& r, Rule rule) {
  return std::any_of(r.violations.begin(), r.violations.end(), [&](const Violation& v) { return v.rule == rule; });
}

}  // namespace

TEST_CASE("relation labels") {
  for (RelationType r : kAllRelationTypes) CHECK(parse_relation(to_string(r)) == r);
  CHECK(parse_relation("临床表现") == RelationType::ClinicalFeature);
  CHECK(parse_relation("禁用药物") == RelationType::ForbiddenDrug);
  CHECK_FALSE(parse_relation("side_effect").has_value());
}

TEST_CASE("role and logic parsing") {
  CHECK(parse_role("C") == Role::Condition);
  CHECK(parse_role("D") == Role::Decision);
  CHECK(parse_logical_rel("and") == LogicalRel::And);
  CHECK(parse_logical_rel("or") == LogicalRel::Or);
  CHECK(parse_logical_rel("null") == LogicalRel::Null);
  CHECK(parse_logical_rel("") == LogicalRel::Null);
  CHECK_FALSE(parse_logical_rel("xor").has_value());
}

TEST_CASE("validate_tree examples") {
  const std::vector<MdtNode> ok{cond({t("a", "b"), t("c", "d")}, LogicalRel::And), dec({t("x", "y")}), dec()};
  CHECK(validate_tree(ok).ok());

  const std::vector<MdtNode> two_leaves{dec({t("a", "b")}), dec({t("c", "d")})};
  const auto r2 = validate_tree(two_leaves);
  REQUIRE(r2.violations.size() == 1);
  CHECK(r2.violations[0].rule == Rule::LeftoverNodes);
  CHECK(r2.violations[0].node_index == 1);

  const std::vector<MdtNode> bad_logic{cond({t("a", "b")}, LogicalRel::And), dec({t("x", "y")}), dec({t("p", "q")})};
  const auto r3 = validate_tree(bad_logic);
  CHECK(has_rule(r3, Rule::LogicalRelMismatch));
  CHECK(r3.violations.front().node_index == 0);

  CHECK_THROWS_AS(validate_tree(std::vector<MdtNode>{}), MalformedInput);
}

TEST_CASE("logical relation required for multi-triplet nodes") {
  const std::vector<MdtNode> nodes{cond({t("a", "b"), t("c", "d")}), dec({t("x", "y")}), dec()};
  CHECK(has_rule(validate_tree(nodes), Rule::LogicalRelMismatch));
}

TEST_CASE("empty condition and empty fields") {
  CHECK(has_rule(validate_tree(std::vector<MdtNode>{cond({}), dec(), dec()}), Rule::EmptyCondition));
  CHECK(has_rule(validate_tree(std::vector<MdtNode>{dec({t("", "b")})}), Rule::EmptyTripletField));
}

TEST_CASE("unknown relation is an error in strict mode, a warning in lenient mode") {
  const std::vector<MdtNode> nodes{dec({t("a", "b", "side_effect")})};
  const auto strict = validate_tree(nodes, {ValidationMode::Strict, false});
  CHECK(has_rule(strict, Rule::UnknownRelation));
  const auto lenient = validate_tree(nodes, {ValidationMode::Lenient, false});
  CHECK(lenient.ok());
  REQUIRE(lenient.warnings.size() == 1);
  CHECK(lenient.warnings[0].rule == Rule::UnknownRelation);
}

TEST_CASE("shallow trees warn only under dataset conformance") {
  const std::vector<MdtNode> single{dec({t("a", "b")})};
  CHECK(validate_tree(single).warnings.empty());
  const auto rep = validate_tree(single, {ValidationMode::Strict, true});
  CHECK(rep.ok());
  REQUIRE(rep.warnings.size() == 1);
  CHECK(rep.warnings[0].rule == Rule::ShallowTree);
}

TEST_CASE("parse_preorder shapes") {
  const Mdt small = parse_preorder(std::vector<MdtNode>{cond({t("a", "b")}), dec({t("c", "d")}), dec()});
  CHECK(small.left(0) == 1);
  CHECK(small.right(0) == 2);
  CHECK(small.is_leaf(1));
  CHECK(small.depth() == 2);

  const Mdt nested = parse_preorder(std::vector<MdtNode>{cond({t("a", "b")}), dec({t("c", "d")}), cond({t("e", "f")}),
                                                         dec({t("g", "h")}), dec()});
  CHECK(nested.left(0) == 1);
  CHECK(nested.right(0) == 2);
  CHECK(nested.left(2) == 3);
  CHECK(nested.right(2) == 4);
  CHECK(nested.depth() == 3);

  const std::vector<MdtNode> cut{cond({t("a", "b")}), dec({t("c", "d")})};
  try {
    (void)parse_preorder(cut);
    FAIL("expected PrematureExhaustion");
  } catch (const PrematureExhaustion& e) {
    CHECK(e.condition_index() == 0);
  }
  const std::vector<MdtNode> extra{dec({t("a", "b")}), dec({t("c", "d")})};
  CHECK_THROWS_AS((void)parse_preorder(extra), LeftoverNodes);
}

TEST_CASE("serialize_preorder") {
  const Mdt one = parse_preorder(std::vector<MdtNode>{dec({t("a", "b")})});
  CHECK(serialize_preorder(one).size() == 1);
  CHECK(one.depth() == 1);
  const std::vector<MdtNode> cdd{cond({t("a", "b")}), dec({t("c", "d")}), dec()};
  CHECK(serialize_preorder(parse_preorder(cdd)) == cdd);
}

TEST_CASE("decision_paths") {
  const Mdt cdd = parse_preorder(std::vector<MdtNode>{cond({t("a", "b")}), dec({t("c", "d")}), dec()});
  const auto paths = decision_paths(cdd);
  REQUIRE(paths.size() == 2);
  CHECK(paths[0].steps.size() == 2);
  CHECK(paths[0].steps[0].branch == Branch::Left);
  CHECK(paths[0].steps[1].branch == Branch::Terminal);
  CHECK(paths[1].steps[0].branch == Branch::Right);

  const Mdt nested = parse_preorder(std::vector<MdtNode>{cond({t("a", "b")}), dec({t("c", "d")}), cond({t("e", "f")}),
                                                         dec({t("g", "h")}), dec()});
  CHECK(decision_paths(nested).size() == 3);

  const Mdt one = parse_preorder(std::vector<MdtNode>{dec({t("a", "b")})});
  const auto single = decision_paths(one);
  REQUIRE(single.size() == 1);
  CHECK(single[0].steps.size() == 1);
}

TEST_CASE("extract_triplets") {
  const Triplet t1 = t("a", "b"), t2 = t("c", "d"), t3 = t("e", "f");
  const Mdt tree = parse_preorder(std::vector<MdtNode>{cond({t1, t2}, LogicalRel::Or), dec({t3}), dec()});
  CHECK(extract_triplets(tree) == std::vector<Triplet>{t1, t2, t3});

  const Mdt dup = parse_preorder(std::vector<MdtNode>{cond({t1}), dec({t1}), dec({t2})});
  const auto all = extract_triplets(dup);
  CHECK(std::count(all.begin(), all.end(), t1) == 2);
  const auto unique = extract_triplets(dup, true);
  CHECK(std::count(unique.begin(), unique.end(), t1) == 1);
  CHECK(unique.size() == 2);
}

TEST_CASE("duplicate triplets within a node are allowed") {
  const std::vector<MdtNode> nodes{dec({t("a", "b"), t("a", "b")}, LogicalRel::And)};
  CHECK(validate_tree(nodes).ok());
}

TEST_CASE("same_content ignores triplet order") {
  const MdtNode a = cond({t("a", "b"), t("c", "d")}, LogicalRel::And);
  const MdtNode b = cond({t("c", "d"), t("a", "b")}, LogicalRel::And);
  CHECK(same_content(a, b));
  CHECK_FALSE(same_content(a, cond({t("a", "b"), t("c", "d")}, LogicalRel::Or)));
}

TEST_CASE("property: generated trees are valid and round-trip") {
  Rng rng(7);
  for (int iter = 0; iter < 500; ++iter) {
    const auto nodes = random_preorder(rng, {5, 31, 3, 0.6, 0.2});
    CAPTURE(iter);
    REQUIRE(validate_tree(nodes).ok());
    const Mdt tree = parse_preorder(nodes);
    CHECK(serialize_preorder(tree) == nodes);
    CHECK(parse_preorder(serialize_preorder(tree)) == tree);

    const auto c = std::count_if(nodes.begin(), nodes.end(), [](const MdtNode& n) { return n.role == Role::Condition; });
    const auto d = static_cast<std::ptrdiff_t>(nodes.size()) - c;
    CHECK(c == d - 1);
    CHECK(decision_paths(tree).size() == static_cast<std::size_t>(d));
  }
}

TEST_CASE("property: single structural edits are rejected") {
  Rng rng(11);
  for (int iter = 0; iter < 500; ++iter) {
    auto nodes = random_preorder(rng);
    CAPTURE(iter);
    auto flipped = nodes;
    const std::size_t i = uniform(rng, 0, nodes.size() - 1);
    flipped[i].role = flipped[i].role == Role::Condition ? Role::Decision : Role::Condition;
    CHECK_FALSE(validate_tree(flipped).ok());

    if (nodes.size() > 1) {
      auto deleted = nodes;
      deleted.erase(deleted.begin() + static_cast<std::ptrdiff_t>(uniform(rng, 0, nodes.size() - 1)));
      CHECK_FALSE(validate_tree(deleted).ok());
    }
  }
}
