/*
 Copyright 2026 The lipsol Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/

#ifndef LIPSOL_CLI_HPP
#define LIPSOL_CLI_HPP

#include <ostream>
#include <string>
#include <vector>

namespace lipsol::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitSolver = 2;

/// Entry point of the `lipsol` tool. `args` excludes the program name.
/// Data goes to `out` (or the --output file), diagnostics to `err`.
int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

} // namespace lipsol::cli

#endif // LIPSOL_CLI_HPP
