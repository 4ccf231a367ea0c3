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

#include "text2mdt/data.hpp"

#include <algorithm>
#include <fstream>
#include <iterator>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include "text2mdt/io.hpp"

namespace text2mdt {

namespace {

std::uint64_t fnv1a(std::uint64_t h, const void* data, std::size_t n) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < n; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t stream_seed(std::uint64_t seed, std::string_view key, std::size_t copy) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  // Little-endian byte order regardless of host so seeds are portable.
  unsigned char buf[8];
  auto put = [&](std::uint64_t v) {
    for (int i = 0; i < 8; ++i) buf[i] = static_cast<unsigned char>(v >> (8 * i));
    h = fnv1a(h, buf, 8);
  };
  put(seed);
  h = fnv1a(h, key.data(), key.size());
  put(static_cast<std::uint64_t>(copy));
  return h;
}

std::string summarize(const std::vector<RecordIssue>& issues) {
  std::ostringstream os;
  os << issues.size() << " violation(s)";
  const std::size_t shown = std::min<std::size_t>(issues.size(), 5);
  for (std::size_t i = 0; i < shown; ++i) {
    const auto& v = issues[i];
    os << "; record " << v.record_id << " node " << v.violation.node_index << " "
       << rule_id(v.violation.rule) << ": " << v.violation.message;
  }
  return os.str();
}

NodeGroup group_of(const MdtNode& n) { return {n.triplets, n.logical_rel}; }

}  // namespace

LoadResult read_dataset(std::istream& in, ValidationMode mode, bool raise_on_violation) {
  const std::string content{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  const bool allow_missing_id = mode == ValidationMode::Lenient;

  LoadResult result;
  auto add = [&](const io::Json& j, std::size_t ordinal) {
    result.records.push_back(
        io::record_from_json(j, "record-" + std::to_string(ordinal), allow_missing_id, &result.unmapped_fields));
  };

  const auto first = content.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && content[first] == '[') {
    io::Json arr;
    try {
      arr = io::Json::parse(content);
    } catch (const io::Json::parse_error& e) {
      throw ParseError(std::string("malformed JSON array: ") + e.what());
    }
    std::size_t ordinal = 0;
    for (const auto& j : arr) add(j, ordinal++);
  } else {
    std::istringstream lines(content);
    std::string line;
    std::size_t lineno = 0;
    std::size_t ordinal = 0;
    while (std::getline(lines, line)) {
      ++lineno;
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      io::Json j;
      try {
        j = io::Json::parse(line);
      } catch (const io::Json::parse_error& e) {
        throw ParseError("line " + std::to_string(lineno) + ": " + e.what());
      }
      add(j, ordinal++);
    }
  }

  validate_records(result, mode);
  if (raise_on_violation && mode == ValidationMode::Strict && !result.violations.empty())
    throw ValidationError(summarize(result.violations));
  return result;
}

LoadResult load_dataset(const std::filesystem::path& path, ValidationMode mode, bool raise_on_violation) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path.string());
  return read_dataset(in, mode, raise_on_violation);
}

void validate_records(LoadResult& result, ValidationMode mode) {
  std::set<std::string> seen;
  const ValidationOptions options{mode, true};
  for (const DatasetRecord& r : result.records) {
    if (!seen.insert(r.id).second)
      result.violations.push_back({r.id, {0, Rule::DuplicateId, "record id appears more than once"}});
    if (r.text.empty()) result.violations.push_back({r.id, {0, Rule::EmptyText, "record text is empty"}});
    if (r.tree.empty()) {
      result.violations.push_back({r.id, {0, Rule::PrematureExhaustion, "record tree is empty"}});
      continue;
    }
    ValidationReport rep = validate_tree(r.tree, options);
    for (auto& v : rep.violations) result.violations.push_back({r.id, std::move(v)});
    for (auto& w : rep.warnings) result.warnings.push_back({r.id, std::move(w)});
  }
}

void write_dataset(std::ostream& out, const std::vector<DatasetRecord>& records) {
  for (const DatasetRecord& r : records) out << io::dump_line(io::to_json(r)) << '\n';
}

void save_dataset(const std::filesystem::path& path, const std::vector<DatasetRecord>& records) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot write " + path.string());
  write_dataset(out, records);
}

bool has_single_entity_overlap(std::span<const Triplet> triplets) {
  const std::set<Triplet> distinct(triplets.begin(), triplets.end());
  const std::vector<Triplet> ts(distinct.begin(), distinct.end());
  for (std::size_t i = 0; i < ts.size(); ++i) {
    const std::set<std::string> a{ts[i].subject, ts[i].object};
    for (std::size_t j = i + 1; j < ts.size(); ++j) {
      const std::set<std::string> b{ts[j].subject, ts[j].object};
      if (a == b) continue;  // same entity pair: overlap on both ends
      for (const auto& e : a)
        if (b.count(e)) return true;
    }
  }
  return false;
}

CorpusStats compute_stats(const std::vector<DatasetRecord>& records) {
  CorpusStats s;
  s.record_count = records.size();
  auto count = [](NodeCounts& c, const MdtNode& n) {
    ++c.total;
    ++(n.role == Role::Condition ? c.condition : c.decision);
    switch (n.logical_rel) {
      case LogicalRel::And: ++c.and_rel; break;
      case LogicalRel::Or: ++c.or_rel; break;
      case LogicalRel::Null: ++c.null_rel; break;
    }
  };
  for (const DatasetRecord& r : records) {
    const Mdt tree = parse_preorder(std::span<const MdtNode>(r.tree));
    ++s.depth_histogram[tree.depth()];
    for (const MdtNode& n : r.tree) {
      count(s.all_nodes, n);
      if (n.triplets.empty()) {
        ++s.placeholder_count;
        continue;
      }
      count(s.node_counts, n);
      for (const Triplet& t : n.triplets) {
        auto rel = parse_relation(t.relation);
        ++s.relation_histogram[rel ? std::string(to_string(*rel)) : t.relation];
        ++s.triplet_count;
      }
    }
    const auto triplets = extract_triplets(std::span<const MdtNode>(r.tree));
    if (has_single_entity_overlap(triplets)) ++s.seo_record_count;
  }
  if (s.record_count > 0) {
    const auto n = static_cast<double>(s.record_count);
    s.avg_nodes_per_tree = static_cast<double>(s.node_counts.total) / n;
    s.avg_triplets_per_tree = static_cast<double>(s.triplet_count) / n;
  }
  return s;
}

double cohens_kappa(std::span<const std::string> labels_a, std::span<const std::string> labels_b) {
  if (labels_a.size() != labels_b.size())
    throw LengthMismatch("label sequences differ in length (" + std::to_string(labels_a.size()) + " vs " +
                         std::to_string(labels_b.size()) + ")");
  if (labels_a.empty()) throw EmptyInput("no labels to compare");

  std::map<std::string, std::size_t> freq_a, freq_b;
  std::size_t agree = 0;
  for (std::size_t i = 0; i < labels_a.size(); ++i) {
    ++freq_a[labels_a[i]];
    ++freq_b[labels_b[i]];
    agree += labels_a[i] == labels_b[i];
  }
  const auto n = static_cast<double>(labels_a.size());
  const double p_o = static_cast<double>(agree) / n;
  double p_e = 0.0;
  for (const auto& [label, ca] : freq_a) {
    auto it = freq_b.find(label);
    if (it != freq_b.end()) p_e += (static_cast<double>(ca) / n) * (static_cast<double>(it->second) / n);
  }
  if (p_e >= 1.0) return 1.0;  // both raters used one label throughout
  return (p_o - p_e) / (1.0 - p_e);
}

std::string_view to_string(SubtaskKind k) {
  switch (k) {
    case SubtaskKind::TE: return "TE";
    case SubtaskKind::NG: return "NG";
    case SubtaskKind::TA: break;
  }
  return "TA";
}

std::vector<std::size_t> shuffled_order(std::size_t n, std::uint64_t seed, std::string_view key,
                                        std::size_t copy) {
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  if (copy == 0 || n < 2) return order;
  std::mt19937_64 rng(stream_seed(seed, key, copy));
  for (std::size_t i = n - 1; i > 0; --i) std::swap(order[i], order[rng() % (i + 1)]);
  return order;
}

SubtaskSets build_subtasks(const std::vector<DatasetRecord>& records, std::size_t augment_factor,
                           std::uint64_t seed) {
  const std::size_t copies = std::max<std::size_t>(1, augment_factor);
  SubtaskSets out;
  for (const DatasetRecord& r : records) {
    SubtaskRecord te;
    te.kind = SubtaskKind::TE;
    te.id = r.id + "#0";
    te.source_id = r.id;
    te.text = r.text;
    te.target_triplets = extract_triplets(std::span<const MdtNode>(r.tree));
    out.te.push_back(te);

    std::vector<NodeGroup> groups;
    for (const MdtNode& n : r.tree)
      if (!n.triplets.empty()) groups.push_back(group_of(n));

    for (std::size_t c = 0; c < copies; ++c) {
      SubtaskRecord ng;
      ng.kind = SubtaskKind::NG;
      ng.id = r.id + "#" + std::to_string(c);
      ng.source_id = r.id;
      ng.copy = c;
      ng.text = r.text;
      for (std::size_t i : shuffled_order(te.target_triplets.size(), seed, "ng:" + r.id, c))
        ng.input_triplets.push_back(te.target_triplets[i]);
      ng.target_groups = groups;
      out.ng.push_back(std::move(ng));

      SubtaskRecord ta;
      ta.kind = SubtaskKind::TA;
      ta.id = r.id + "#" + std::to_string(c);
      ta.source_id = r.id;
      ta.copy = c;
      ta.text = r.text;
      for (std::size_t i : shuffled_order(r.tree.size(), seed, "ta:" + r.id, c))
        ta.input_nodes.push_back(group_of(r.tree[i]));
      ta.target_tree = r.tree;
      out.ta.push_back(std::move(ta));
    }
  }
  return out;
}

void write_subtask_records(std::ostream& out, const std::vector<SubtaskRecord>& records) {
  for (const SubtaskRecord& r : records) out << io::dump_line(io::to_json(r)) << '\n';
}

}  // namespace text2mdt
