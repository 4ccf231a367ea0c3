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

#include "text2mdt/render.hpp"

#include <sstream>

namespace text2mdt {

namespace {

std::string dot_quote(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    if (c == '\n') {
      out += "\\n";
      continue;
    }
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::string triplet_text(const Triplet& t) { return "(" + t.subject + ", " + t.relation + ", " + t.object + ")"; }

}  // namespace

std::string node_label(const MdtNode& node) {
  std::string out = node.role == Role::Condition ? "<> " : "[] ";
  if (node.triplets.empty()) return out + "(empty)";
  const std::string sep = node.logical_rel == LogicalRel::Null
                              ? " "
                              : " " + std::string(node.logical_rel == LogicalRel::And ? "AND" : "OR") + " ";
  for (std::size_t i = 0; i < node.triplets.size(); ++i) {
    if (i) out += sep;
    out += triplet_text(node.triplets[i]);
  }
  return out;
}

std::string render_ascii(const Mdt& tree) {
  std::ostringstream os;
  auto walk = [&](auto&& self, std::size_t i, const std::string& prefix, std::string_view edge, bool last) -> void {
    if (edge.empty()) {
      os << node_label(tree.node(i)) << '\n';
    } else {
      os << prefix << (last ? "`-- " : "|-- ") << edge << ": " << node_label(tree.node(i)) << '\n';
    }
    if (tree.is_leaf(i)) return;
    const std::string child_prefix = edge.empty() ? prefix : prefix + (last ? "    " : "|   ");
    self(self, tree.left(i), child_prefix, "Yes", false);
    self(self, tree.right(i), child_prefix, "No", true);
  };
  walk(walk, tree.root(), "", "", true);
  return os.str();
}

std::string render_dot(const Mdt& tree, std::string_view graph_name) {
  std::ostringstream os;
  os << "digraph " << dot_quote(graph_name) << " {\n";
  os << "  node [fontname=\"sans-serif\"];\n";
  for (std::size_t i = 0; i < tree.size(); ++i) {
    const MdtNode& n = tree.node(i);
    std::string label = node_label(n).substr(3);
    os << "  n" << i << " [shape=" << (n.role == Role::Condition ? "diamond" : "box")
       << ", label=" << dot_quote(label) << "];\n";
  }
  for (std::size_t i = 0; i < tree.size(); ++i) {
    if (tree.is_leaf(i)) continue;
    os << "  n" << i << " -> n" << tree.left(i) << " [label=\"Yes\"];\n";
    os << "  n" << i << " -> n" << tree.right(i) << " [label=\"No\"];\n";
  }
  os << "}\n";
  return os.str();
}

}  // namespace text2mdt
