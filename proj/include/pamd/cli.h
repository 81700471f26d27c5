// Copyright 2026 The pamdenoise Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef PAMD_CLI_H_
#define PAMD_CLI_H_

#include <iosfwd>
#include <string>
#include <vector>

namespace pamd {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitData = 2,
  kExitDivergence = 3,
};

// Entry point of the `pamd` tool. args[0] is the program name. Normal output
// goes to `out`; the resolved-configuration block and diagnostics go to
// `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Reads a flat key=value file. Blank lines and '#' comments are ignored.
std::vector<std::pair<std::string, std::string>> read_config_file(const std::string& path);

// Inserts `--key value` for every config entry whose flag is not already on
// the command line, directly after the subcommand name.
std::vector<std::string> merge_config(const std::vector<std::string>& args);

}  // namespace pamd

#endif  // PAMD_CLI_H_
