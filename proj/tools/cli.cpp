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

#include "cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <numeric>
#include <sstream>

#include "CLI11.hpp"
#include "text2mdt/data.hpp"
#include "text2mdt/decode.hpp"
#include "text2mdt/evaluate.hpp"
#include "text2mdt/io.hpp"
#include "text2mdt/render.hpp"

namespace text2mdt::cli {

namespace {

namespace fs = std::filesystem;
using io::Json;

/// Raised for command-level failures that map straight onto an exit code.
struct CommandFailure {
  int code;
  std::string message;
};

ValidationMode parse_mode(const std::string& s) {
  return s == "lenient" ? ValidationMode::Lenient : ValidationMode::Strict;
}

void require_file(const std::string& path) {
  if (!fs::is_regular_file(path)) throw CommandFailure{kIoError, "no such file: " + path};
}

/// Writes to --out when given, stdout otherwise.
void emit(const CliConfig& cfg, std::ostream& out, const std::string& text) {
  if (cfg.out.empty()) {
    out << text;
    return;
  }
  std::ofstream f(cfg.out, std::ios::binary);
  if (!f) throw CommandFailure{kIoError, "cannot write " + cfg.out};
  f << text;
}

std::string fixed(double v, int digits = 4) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(digits) << v;
  return os.str();
}

Json issue_json(const RecordIssue& i) {
  Json j;
  j["record"] = i.record_id;
  j["node"] = i.violation.node_index;
  j["rule"] = std::string(rule_id(i.violation.rule));
  j["message"] = i.violation.message;
  return j;
}

// ---------------------------------------------------------------------------

int cmd_validate(const CliConfig& cfg, std::ostream& out) {
  require_file(cfg.inputs.at(0));
  const LoadResult res = load_dataset(cfg.inputs[0], parse_mode(cfg.mode), false);
  std::ostringstream os;
  if (cfg.format == "structured") {
    Json j;
    j["records"] = res.records.size();
    j["violation_count"] = res.violations.size();
    j["violations"] = Json::array();
    for (const auto& v : res.violations) j["violations"].push_back(issue_json(v));
    j["warnings"] = Json::array();
    for (const auto& w : res.warnings) j["warnings"].push_back(issue_json(w));
    os << io::dump_line(j) << '\n';
  } else {
    for (const auto& v : res.violations)
      os << "record " << v.record_id << " node " << v.violation.node_index << " " << rule_id(v.violation.rule)
         << ": " << v.violation.message << '\n';
    for (const auto& w : res.warnings)
      os << "warning: record " << w.record_id << " node " << w.violation.node_index << " "
         << rule_id(w.violation.rule) << ": " << w.violation.message << '\n';
    os << res.records.size() << " records, " << res.violations.size() << " violations\n";
  }
  emit(cfg, out, os.str());
  return res.violations.empty() ? kOk : kDomainFailure;
}

Json prf_json(const Prf& p) {
  Json j;
  j["precision"] = p.precision;
  j["recall"] = p.recall;
  j["f1"] = p.f1;
  return j;
}

int cmd_eval(const CliConfig& cfg, std::ostream& out) {
  require_file(cfg.inputs.at(0));
  require_file(cfg.inputs.at(1));
  LoadResult gold;
  try {
    gold = load_dataset(cfg.inputs[0], parse_mode(cfg.mode));
  } catch (const ValidationError& e) {
    throw CommandFailure{kDomainFailure, std::string("gold file is invalid: ") + e.what()};
  }
  const LoadResult pred = load_dataset(cfg.inputs[1], ValidationMode::Lenient);

  EvalConfig ec;
  ec.lr_convention = cfg.lr_convention == "paper-raw" ? LrConvention::PaperRaw : LrConvention::Similarity;
  if (cfg.ng_include_role >= 0) ec.ng_include_role = cfg.ng_include_role == 1;
  const EvalReport rep = evaluate(pred.records, gold.records, ec, cfg.breakdown);

  std::ostringstream os;
  if (cfg.format == "structured") {
    Json j;
    j["records"] = rep.record_count;
    j["invalid_predictions"] = rep.invalid_predictions;
    j["lr_convention"] = cfg.lr_convention;
    j["tree_acc"] = rep.tree_acc;
    j["dp"] = prf_json(rep.decision_path);
    j["tree_lr"] = rep.tree_lr;
    if (rep.triplet) j["triplet"] = prf_json(*rep.triplet);
    if (rep.ng_lr) j["ng_lr"] = *rep.ng_lr;
    j["per_record"] = Json::array();
    for (const RecordScores& r : rep.per_record) {
      Json row;
      row["id"] = r.id;
      row["invalid_prediction"] = r.invalid_prediction;
      row["tree_acc"] = r.tree_acc;
      row["dp"] = prf_json(r.decision_path);
      row["tree_lr"] = r.tree_lr;
      if (r.triplet) row["triplet"] = prf_json(*r.triplet);
      if (r.ng_lr) row["ng_lr"] = *r.ng_lr;
      j["per_record"].push_back(std::move(row));
    }
    os << io::dump_line(j) << '\n';
  } else {
    os << std::left;
    auto line = [&](const std::string& name, const std::string& value) {
      os << std::setw(20) << name << value << '\n';
    };
    line("records", std::to_string(rep.record_count));
    line("invalid predictions", std::to_string(rep.invalid_predictions));
    if (rep.triplet) {
      line("Triplet Prec", fixed(rep.triplet->precision));
      line("Triplet Rec", fixed(rep.triplet->recall));
      line("Triplet F1", fixed(rep.triplet->f1));
    }
    if (rep.ng_lr) line("NG_LR", fixed(*rep.ng_lr));
    line("TreeAcc", fixed(rep.tree_acc));
    line("DP-F1", fixed(rep.decision_path.f1));
    line("Tree_LR", fixed(rep.tree_lr));
  }
  emit(cfg, out, os.str());
  return kOk;
}

int cmd_stats(const CliConfig& cfg, std::ostream& out) {
  require_file(cfg.inputs.at(0));
  const LoadResult res = load_dataset(cfg.inputs[0], parse_mode(cfg.mode));
  if (res.records.empty()) throw CommandFailure{kDomainFailure, "dataset is empty"};
  const CorpusStats s = compute_stats(res.records);

  auto counts_json = [](const NodeCounts& c) {
    Json j;
    j["total"] = c.total;
    j["decision"] = c.decision;
    j["condition"] = c.condition;
    j["and"] = c.and_rel;
    j["or"] = c.or_rel;
    j["null"] = c.null_rel;
    return j;
  };

  std::ostringstream os;
  if (cfg.format == "structured") {
    Json j;
    j["records"] = s.record_count;
    j["depth"] = Json::object();
    for (const auto& [d, c] : s.depth_histogram) j["depth"][std::to_string(d)] = c;
    j["relations"] = Json::object();
    for (const auto& [r, c] : s.relation_histogram) j["relations"][r] = c;
    j["nodes"] = counts_json(s.node_counts);
    j["all_nodes"] = counts_json(s.all_nodes);
    j["placeholders"] = s.placeholder_count;
    j["triplets"] = s.triplet_count;
    j["avg_nodes_per_tree"] = s.avg_nodes_per_tree;
    j["avg_triplets_per_tree"] = s.avg_triplets_per_tree;
    j["seo_records"] = s.seo_record_count;
    os << io::dump_line(j) << '\n';
  } else {
    const auto pct = [](std::size_t part, std::size_t whole) {
      return whole == 0 ? std::string("-") : fixed(100.0 * static_cast<double>(part) / static_cast<double>(whole), 2) + "%";
    };
    os << std::left;
    os << "records: " << s.record_count << "\n\n";
    os << std::setw(20) << "Tree_Depth" << std::setw(10) << "Amount" << "Proportion\n";
    for (const auto& [d, c] : s.depth_histogram)
      os << std::setw(20) << d << std::setw(10) << c << pct(c, s.record_count) << '\n';
    os << '\n' << std::setw(20) << "Relation_Name" << std::setw(10) << "Amount" << "Proportion\n";
    std::vector<std::pair<std::string, std::size_t>> rels(s.relation_histogram.begin(), s.relation_histogram.end());
    std::stable_sort(rels.begin(), rels.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
    for (const auto& [r, c] : rels) os << std::setw(20) << r << std::setw(10) << c << pct(c, s.triplet_count) << '\n';
    const NodeCounts& n = s.node_counts;
    os << "\nnodes: " << n.total << " (decision " << n.decision << ", condition " << n.condition << "; or "
       << n.or_rel << ", and " << n.and_rel << ", null " << n.null_rel << ")\n";
    os << "empty placeholders: " << s.placeholder_count << " (all nodes " << s.all_nodes.total << ")\n";
    os << "avg nodes per tree: " << fixed(s.avg_nodes_per_tree, 2) << '\n';
    os << "avg triplets per tree: " << fixed(s.avg_triplets_per_tree, 2) << '\n';
    os << "records with single entity overlap: " << s.seo_record_count << '\n';
  }
  emit(cfg, out, os.str());
  return kOk;
}

int cmd_render(const CliConfig& cfg, std::ostream& out) {
  require_file(cfg.inputs.at(0));
  const LoadResult res = load_dataset(cfg.inputs[0], ValidationMode::Lenient);
  auto it = std::find_if(res.records.begin(), res.records.end(),
                         [&](const DatasetRecord& r) { return r.id == cfg.record_id; });
  if (it == res.records.end()) throw CommandFailure{kDomainFailure, "no record with id '" + cfg.record_id + "'"};
  Mdt tree = [&] {
    try {
      return parse_preorder(std::span<const MdtNode>(it->tree));
    } catch (const Error& e) {
      throw CommandFailure{kDomainFailure, "record '" + cfg.record_id + "' has no valid tree: " + e.what()};
    }
  }();
  emit(cfg, out, cfg.style == "dot" ? render_dot(tree, cfg.record_id) : render_ascii(tree));
  return kOk;
}

// Score files -----------------------------------------------------------------

const Json& field(const Json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) throw ParseError(std::string("score file lacks '") + key + "'");
  return *it;
}

std::string canonical_label(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (s == "left-child" || s == "left_child") return "left";
  if (s == "right-child" || s == "right_child") return "right";
  if (s == "condition") return "c";
  if (s == "decision") return "d";
  return s;
}

/// Column permutation from the file's label order onto `expected`.
std::vector<Eigen::Index> label_columns(const Json& labels, const std::vector<std::string>& expected) {
  if (!labels.is_array() || labels.size() != expected.size())
    throw ParseError("label vocabulary must list exactly " + std::to_string(expected.size()) + " labels");
  std::vector<Eigen::Index> col(expected.size(), -1);
  for (std::size_t f = 0; f < labels.size(); ++f) {
    if (!labels[f].is_string()) throw ParseError("labels must be strings");
    const std::string l = canonical_label(labels[f].get<std::string>());
    auto pos = std::find(expected.begin(), expected.end(), l);
    if (pos == expected.end() || col[f] != -1) throw ParseError("unexpected label '" + l + "'");
    col[f] = pos - expected.begin();
  }
  std::vector<bool> hit(expected.size(), false);
  for (auto c : col) hit[static_cast<std::size_t>(c)] = true;
  if (std::find(hit.begin(), hit.end(), false) != hit.end()) throw ParseError("duplicate labels in vocabulary");
  return col;
}

Eigen::MatrixXd read_rows(const Json& probs, Eigen::Index rows, const std::vector<Eigen::Index>& columns) {
  const auto k = static_cast<Eigen::Index>(columns.size());
  if (!probs.is_array() || probs.size() != static_cast<std::size_t>(rows * k))
    throw ParseError("probability array must hold " + std::to_string(rows * k) + " values");
  Eigen::MatrixXd m(rows, k);
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index f = 0; f < k; ++f) {
      const Json& v = probs[static_cast<std::size_t>(r * k + f)];
      if (!v.is_number()) throw ParseError("probabilities must be numbers");
      m(r, columns[static_cast<std::size_t>(f)]) = v.get<double>();
    }
  return m;
}

ProbTable read_table(const Json& j, const char* labels_key, const char* probs_key, Eigen::Index n,
                     const std::vector<std::string>& expected) {
  const auto cols = label_columns(field(j, labels_key), expected);
  ProbTable::Cells cells = read_rows(field(j, probs_key), n * n, cols);
  return ProbTable(n, static_cast<Eigen::Index>(expected.size()), std::move(cells));
}

int cmd_decode(const CliConfig& cfg, std::ostream& out) {
  require_file(cfg.inputs.at(0));
  std::ifstream f(cfg.inputs[0], std::ios::binary);
  Json j;
  try {
    j = Json::parse(f);
  } catch (const Json::parse_error& e) {
    throw ParseError(std::string("malformed score file: ") + e.what());
  }
  if (!j.is_object()) throw ParseError("score file must be a JSON object");
  std::string task = cfg.task;
  if (task.empty() && j.contains("task") && j["task"].is_string()) task = j["task"].get<std::string>();
  const Json& n_json = field(j, "n");
  if (!n_json.is_number_integer() || n_json.get<long long>() < 1) throw ParseError("'n' must be a positive integer");
  const auto n = static_cast<Eigen::Index>(n_json.get<long long>());

  Json result;
  if (task == "ng") {
    const ProbTable table = read_table(j, "labels", "probs", n, {"and", "or", "null"});
    const auto groups = decode_node_grouping(table);
    std::vector<Triplet> triplets;
    if (j.contains("triples")) {
      for (const Json& t : j["triples"]) triplets.push_back(io::triplet_from_json(t));
      if (static_cast<Eigen::Index>(triplets.size()) != n) throw ParseError("'triples' must list n triplets");
    }
    result["groups"] = Json::array();
    for (const TripletGroup& g : groups) {
      Json gj;
      gj["members"] = g.members;
      gj["logic_rel"] = std::string(to_string(g.logical_rel));
      if (!triplets.empty()) {
        gj["triples"] = Json::array();
        for (std::size_t m : g.members) gj["triples"].push_back(io::to_json(triplets[m]));
      }
      result["groups"].push_back(std::move(gj));
    }
  } else if (task == "tree") {
    const ProbTable edges = read_table(j, "edge_labels", "edge_probs", n, {"left", "right", "none"});
    const auto role_cols = label_columns(field(j, "role_labels"), {"c", "d"});
    const Eigen::MatrixXd roles = read_rows(field(j, "role_probs"), n, role_cols);
    std::vector<NodeGroup> nodes;
    const Json& nodes_json = field(j, "nodes");
    if (!nodes_json.is_array() || static_cast<Eigen::Index>(nodes_json.size()) != n)
      throw ParseError("'nodes' must list n nodes");
    for (const Json& nj : nodes_json) {
      NodeGroup g;
      for (const Json& t : field(nj, "triples")) g.triplets.push_back(io::triplet_from_json(t));
      if (nj.contains("logic_rel")) {
        auto l = parse_logical_rel(nj["logic_rel"].get<std::string>());
        if (!l) throw ParseError("unknown logic_rel in nodes");
        g.logical_rel = *l;
      }
      nodes.push_back(std::move(g));
    }
    const Mdt tree = decode_tree_assembly(roles, edges, nodes, cfg.force);
    DatasetRecord rec;
    rec.id = j.contains("id") ? j["id"].get<std::string>() : "decoded";
    rec.text = j.contains("text") ? j["text"].get<std::string>() : "-";
    rec.tree = serialize_preorder(tree);
    result = io::to_json(rec);
  } else if (task == "te") {
    const Json& labels = field(j, "labels");
    const Json& kinds = field(j, "label_kinds");
    if (!labels.is_array() || !kinds.is_array() || labels.size() != kinds.size())
      throw ParseError("'labels' and 'label_kinds' must be arrays of equal length");
    TripletLabelSchema schema;
    for (std::size_t i = 0; i < labels.size(); ++i) {
      schema.names.push_back(labels[i].get<std::string>());
      const std::string k = kinds[i].get<std::string>();
      if (k == "entity") schema.kinds.push_back(LabelKind::Entity);
      else if (k == "relation") schema.kinds.push_back(LabelKind::Relation);
      else if (k == "null") schema.kinds.push_back(LabelKind::Null);
      else throw ParseError("label kind must be entity, relation or null");
    }
    std::vector<Eigen::Index> identity(labels.size());
    std::iota(identity.begin(), identity.end(), 0);
    ProbTable table(n, static_cast<Eigen::Index>(labels.size()), read_rows(field(j, "probs"), n * n, identity));
    std::vector<std::string> tokens = field(j, "tokens").get<std::vector<std::string>>();
    const std::string joiner = j.value("joiner", std::string());
    const TripletDecoding dec = decode_triplet_table(table, schema, tokens, joiner);
    result["spans"] = Json::array();
    for (const EntitySpan& s : dec.spans) {
      Json sj;
      sj["begin"] = s.begin;
      sj["end"] = s.end;
      sj["label"] = s.label;
      sj["prob"] = s.prob;
      result["spans"].push_back(std::move(sj));
    }
    result["triples"] = Json::array();
    for (const Triplet& t : dec.triplets) result["triples"].push_back(io::to_json(t));
  } else {
    throw CommandFailure{kIoError, "unknown decode task '" + task + "' (expected ng, tree or te)"};
  }
  emit(cfg, out, io::dump_line(result) + "\n");
  return kOk;
}

int cmd_build_subtasks(const CliConfig& cfg, std::ostream& out) {
  require_file(cfg.inputs.at(0));
  if (cfg.out.empty()) throw CommandFailure{kIoError, "build-subtasks needs --out DIR"};
  const LoadResult res = load_dataset(cfg.inputs[0], parse_mode(cfg.mode));
  const SubtaskSets sets = build_subtasks(res.records, cfg.augment, cfg.seed);
  std::error_code ec;
  fs::create_directories(cfg.out, ec);
  if (ec) throw CommandFailure{kIoError, "cannot create " + cfg.out + ": " + ec.message()};
  auto write = [&](const char* name, const std::vector<SubtaskRecord>& recs) {
    std::ofstream f(fs::path(cfg.out) / name, std::ios::binary);
    if (!f) throw CommandFailure{kIoError, std::string("cannot write ") + name};
    write_subtask_records(f, recs);
  };
  write("te.jsonl", sets.te);
  write("ng.jsonl", sets.ng);
  write("ta.jsonl", sets.ta);
  out << "TE " << sets.te.size() << "\nNG " << sets.ng.size() << "\nTA " << sets.ta.size() << '\n';
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CliConfig cfg;
  CLI::App app{"Medical decision tree toolkit: validation, evaluation, statistics, rendering, decoding", "text2mdt"};
  app.require_subcommand(1, 1);

  const std::vector<std::string> modes{"strict", "lenient"};
  const std::vector<std::string> formats{"table", "structured"};

  auto* validate = app.add_subcommand("validate", "Check every record of a dataset file");
  validate->add_option("file", cfg.inputs, "Dataset file")->required()->expected(1);
  validate->add_option("--mode", cfg.mode, "Relation label handling")->check(CLI::IsMember(modes));
  validate->add_option("--format", cfg.format)->check(CLI::IsMember(formats));
  validate->add_option("--out", cfg.out, "Write the report here");

  auto* eval = app.add_subcommand("eval", "Score predicted trees against gold trees");
  eval->add_option("files", cfg.inputs, "GOLD PRED")->required()->expected(2);
  eval->add_option("--mode", cfg.mode, "Validation mode for the gold file")->check(CLI::IsMember(modes));
  eval->add_option("--lr-convention", cfg.lr_convention)->check(CLI::IsMember({"similarity", "paper-raw"}));
  eval->add_flag_callback("--ng-include-role", [&cfg] { cfg.ng_include_role = 1; },
                          "Include role atoms in node-grouping tuples (default with --breakdown)");
  eval->add_flag_callback("--no-ng-include-role", [&cfg] { cfg.ng_include_role = 0; },
                          "Leave role atoms out of node-grouping tuples");
  eval->add_flag("--breakdown", cfg.breakdown, "Also derive triplet and NG_LR scores from the trees");
  eval->add_option("--format", cfg.format)->check(CLI::IsMember(formats));
  eval->add_option("--out", cfg.out);

  auto* stats = app.add_subcommand("stats", "Corpus statistics");
  stats->add_option("file", cfg.inputs)->required()->expected(1);
  stats->add_option("--mode", cfg.mode)->check(CLI::IsMember(modes));
  stats->add_option("--format", cfg.format)->check(CLI::IsMember(formats));
  stats->add_option("--out", cfg.out);

  auto* render = app.add_subcommand("render", "Draw one record's tree");
  std::string render_file;
  render->add_option("file", render_file)->required();
  render->add_option("record-id", cfg.record_id)->required();
  render->add_option("--style", cfg.style)->check(CLI::IsMember({"ascii", "dot"}));
  render->add_option("--out", cfg.out);

  auto* decode = app.add_subcommand("decode", "Decode a score-table file");
  decode->add_option("scores", cfg.inputs)->required()->expected(1);
  decode->add_option("--task", cfg.task)->check(CLI::IsMember({"ng", "tree", "te"}));
  decode->add_flag("--force", cfg.force, "Always complete tree assembly into a valid tree");
  decode->add_option("--out", cfg.out);

  auto* subtasks = app.add_subcommand("build-subtasks", "Write TE/NG/TA subtask datasets");
  subtasks->add_option("input", cfg.inputs)->required()->expected(1);
  subtasks->add_option("--out", cfg.out, "Output directory")->required();
  subtasks->add_option("--augment", cfg.augment, "Copies per record for NG/TA (0 or 1: original only)");
  subtasks->add_option("--seed", cfg.seed);
  subtasks->add_option("--mode", cfg.mode)->check(CLI::IsMember(modes));

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e, out, err);
    return rc == 0 ? kOk : kIoError;
  }

  cfg.subcommand = app.get_subcommands().front()->get_name();
  if (cfg.subcommand == "render") cfg.inputs = {render_file};
  try {
    if (cfg.subcommand == "validate") return cmd_validate(cfg, out);
    if (cfg.subcommand == "eval") return cmd_eval(cfg, out);
    if (cfg.subcommand == "stats") return cmd_stats(cfg, out);
    if (cfg.subcommand == "render") return cmd_render(cfg, out);
    if (cfg.subcommand == "decode") return cmd_decode(cfg, out);
    return cmd_build_subtasks(cfg, out);
  } catch (const CommandFailure& f) {
    err << "error: " << f.message << '\n';
    return f.code;
  } catch (const IdMismatch& e) {
    err << "error: " << e.what() << '\n';
    return kAlignmentError;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kIoError;
  } catch (const SchemaError& e) {
    err << "error: " << e.what() << '\n';
    return kIoError;
  } catch (const NormalizationError& e) {
    err << "error: " << e.what() << '\n';
    return kIoError;
  } catch (const DimensionMismatch& e) {
    err << "error: " << e.what() << '\n';
    return kIoError;
  } catch (const DecodingIncomplete& e) {
    err << "error: " << e.what() << '\n';
    return kDomainFailure;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kDomainFailure;
  } catch (const io::Json::exception& e) {
    err << "error: malformed input: " << e.what() << '\n';
    return kIoError;
  }
}

}  // namespace text2mdt::cli
