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

#ifndef TEXT2MDT_TOOLS_CLI_HPP
#define TEXT2MDT_TOOLS_CLI_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace text2mdt::cli {

/// Stable exit-code contract.
enum ExitCode : int {
  kOk = 0,
  kDomainFailure = 1,  // validation or evaluation failed semantically
  kIoError = 2,        // unreadable or malformed input
  kAlignmentError = 3, // pred/gold record ids do not line up
};

struct CliConfig {
  std::string subcommand;
  std::vector<std::string> inputs;
  std::string record_id;
  std::string out;  // empty: stdout
  std::string mode = "strict";
  std::string lr_convention = "similarity";
  int ng_include_role = -1;  // -1 unset, 0 off, 1 on
  bool breakdown = false;
  std::string format = "table";
  std::string style = "ascii";
  std::string task;
  bool force = false;
  std::uint64_t seed = 0;
  std::size_t augment = 0;
};

/// Runs one command line (without the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace text2mdt::cli

#endif  // TEXT2MDT_TOOLS_CLI_HPP
