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

#ifndef TEXT2MDT_RENDER_HPP
#define TEXT2MDT_RENDER_HPP

#include <string>
#include <string_view>

#include "text2mdt/core.hpp"

namespace text2mdt {

/// One-line summary of a node: "<> a | b | c (and)" for conditions,
/// "[] ..." for decisions, "[] (empty)" for placeholders.
std::string node_label(const MdtNode& node);

/// Indented tree; left children are the "Yes" branch, right children "No".
std::string render_ascii(const Mdt& tree);

/// Graphviz digraph: diamonds for conditions, boxes for decisions, edges
/// labelled Yes/No.
std::string render_dot(const Mdt& tree, std::string_view graph_name = "mdt");

}  // namespace text2mdt

#endif  // TEXT2MDT_RENDER_HPP
