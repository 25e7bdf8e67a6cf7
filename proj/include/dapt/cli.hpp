// Copyright 2026 The dapt Authors.
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

#ifndef DAPT_CLI_HPP_
#define DAPT_CLI_HPP_

#include <ostream>
#include <string>
#include <vector>

namespace dapt {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;

/// Runs one subcommand. `args` excludes the program name. Prints one JSON
/// summary line to `out` on success and a JSON error object to `err`
/// otherwise. Returns 0, 1 (usage) or 2 (data error).
int run_subcommand(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace dapt

#endif  // DAPT_CLI_HPP_
