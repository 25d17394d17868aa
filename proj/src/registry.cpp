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

#include "lipsol/problem.hpp"

#include <array>

#include "lipsol/error.hpp"

namespace lipsol {

namespace {

// Kept byte-identical to the files under problems/ (checked by test_problem).
constexpr std::string_view k_example1 = R"json({
  "name": "example1",
  "n": 1,
  "m": 2,
  "p": 2,
  "domain": {"lower": [-2], "upper": [2]},
  "A": [["1", "0"],
        ["-1", "-x1"]],
  "b": ["1", "-(1 + x1)"],
  "pi_des": ["-2", "0"],
  "pi_f": ["1 - x1^2", "1 + 2*x1"],
  "constants": {
    "L_a": [0, 1],
    "L_b": [0, 1.143],
    "L_pi_des": 0,
    "L_pi_f": 4.473,
    "U_f_bar": 5.831
  }
}
)json";

constexpr std::string_view k_example2 = R"json({
  "name": "example2",
  "n": 2,
  "m": 2,
  "p": 2,
  "domain": {"lower": [-2, -2], "upper": [2, 2]},
  "A": [["-1", "0"],
        ["-1", "-x1"]],
  "b": ["-1", "-(1 + x2)"],
  "pi_des": ["0", "0"],
  "pi_f": ["2 + abs(x2)", "0"],
  "constants": {
    "L_a": [0, 1],
    "L_b": [0, 1.424],
    "L_pi_des": 0,
    "L_pi_f": 1,
    "U_f_bar": 4
  }
}
)json";

constexpr std::string_view k_robinson = R"json({
  "name": "robinson",
  "n": 2,
  "m": 4,
  "p": 12,
  "domain": {"lower": [-2, -2], "upper": [2, 2]},
  "A": [["0", "1", "-1", "0"],
        ["0", "-1", "-1", "0"],
        ["1", "0", "-1", "0"],
        ["-1", "0", "-1", "-x1"],
        ["1", "0", "0", "0"],
        ["0", "1", "0", "0"],
        ["0", "0", "1", "0"],
        ["0", "0", "0", "1"],
        ["-1", "0", "0", "0"],
        ["0", "-1", "0", "0"],
        ["0", "0", "-1", "0"],
        ["0", "0", "0", "-1"]],
  "b": ["-1", "-1", "-1", "-1 - x2",
        "5", "5", "5", "5", "5", "5", "5", "5"],
  "pi_des": ["0", "0", "0", "0"],
  "pi_f": ["0", "0", "2 + abs(x2)", "0"],
  "constants": {
    "L_a": [0, 0, 0, 0.7072, 0, 0, 0, 0, 0, 0, 0, 0],
    "L_b": [0, 0, 0, 0.832, 0, 0, 0, 0, 0, 0, 0, 0],
    "L_pi_des": 0,
    "L_pi_f": 1,
    "U_f_bar": 4
  }
}
)json";

struct Entry {
  std::string_view name;
  std::string_view source;
};

constexpr std::array<Entry, 3> kEntries{{
    {"example1", k_example1},
    {"example2", k_example2},
    {"robinson", k_robinson},
}};

} // namespace

std::vector<std::string> registry_names() {
  std::vector<std::string> names;
  for (const auto &e : kEntries) names.emplace_back(e.name);
  return names;
}

std::string_view registry_source(std::string_view name) {
  for (const auto &e : kEntries) {
    if (e.name == name) return e.source;
  }
  throw ProblemError("unknown built-in problem '" + std::string(name) + "'");
}

ParametricProblem registry_get(std::string_view name) { return parse_problem(registry_source(name)); }

ParametricProblem load_problem(const std::string &name_or_path) {
  for (const auto &e : kEntries) {
    if (e.name == name_or_path) return parse_problem(e.source);
  }
  return load_problem_file(name_or_path);
}

} // namespace lipsol
