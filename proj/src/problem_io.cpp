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

#include <fmt/format.h>

#include <fstream>
#include <sstream>

#include "json.hpp"
#include "lipsol/error.hpp"
#include "lipsol/problem.hpp"

namespace lipsol {

namespace {

using nlohmann::json;

Expression to_expr(const json &j, const std::string &where) {
  try {
    if (j.is_string()) return Expression::parse(j.get<std::string>());
    if (j.is_number()) {
      const double v = j.get<double>();
      return v < 0 ? Expression::unary(Op::Neg, Expression::number(-v)) : Expression::number(v);
    }
  } catch (const ParseError &e) {
    throw ProblemError(where + ": " + e.what());
  }
  throw ProblemError(where + ": expected an expression string");
}

std::vector<Expression> expr_list(const json &j, const std::string &where) {
  if (!j.is_array()) throw ProblemError(where + ": expected an array");
  std::vector<Expression> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    out.push_back(to_expr(j[i], fmt::format("{}[{}]", where, i + 1)));
  }
  return out;
}

std::vector<std::string> expr_strings(const std::vector<Expression> &es) {
  std::vector<std::string> out;
  for (const auto &e : es) out.push_back(e.to_string());
  return out;
}

template <typename T>
T field(const json &j, const char *key) {
  if (!j.contains(key)) throw ProblemError(std::string("missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception &e) {
    throw ProblemError(std::string("field '") + key + "': " + e.what());
  }
}

} // namespace

ParametricProblem parse_problem(std::string_view json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error &e) {
    throw ProblemError(std::string("malformed problem file: ") + e.what());
  }
  if (!j.is_object()) throw ProblemError("problem file must hold a JSON object");

  ParametricProblem prob;
  prob.name = j.value("name", std::string("unnamed"));
  prob.n = field<std::size_t>(j, "n");
  prob.m = field<std::size_t>(j, "m");
  prob.p = field<std::size_t>(j, "p");

  const json dom = field<json>(j, "domain");
  prob.domain.lower = field<std::vector<double>>(dom, "lower");
  prob.domain.upper = field<std::vector<double>>(dom, "upper");

  const json rows = field<json>(j, "A");
  if (!rows.is_array()) throw ProblemError("A: expected an array of rows");
  for (std::size_t i = 0; i < rows.size(); ++i) {
    prob.A.push_back(expr_list(rows[i], fmt::format("A[{}]", i + 1)));
  }
  prob.b = expr_list(field<json>(j, "b"), "b");
  prob.pi_des = expr_list(field<json>(j, "pi_des"), "pi_des");
  if (j.contains("pi_f") && !j["pi_f"].is_null()) {
    prob.pi_f = expr_list(j["pi_f"], "pi_f");
  }
  if (j.contains("constants") && !j["constants"].is_null()) {
    const json &c = j["constants"];
    LipschitzMetadata meta;
    meta.L_a = field<std::vector<double>>(c, "L_a");
    meta.L_b = field<std::vector<double>>(c, "L_b");
    meta.L_pi_des = field<double>(c, "L_pi_des");
    meta.L_pi_f = field<double>(c, "L_pi_f");
    meta.U_f_bar = field<double>(c, "U_f_bar");
    prob.constants = std::move(meta);
  }
  prob.validate();
  return prob;
}

ParametricProblem load_problem_file(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw ProblemError("cannot open problem file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_problem(ss.str());
}

std::string problem_to_json(const ParametricProblem &problem) {
  json j;
  j["name"] = problem.name;
  j["n"] = problem.n;
  j["m"] = problem.m;
  j["p"] = problem.p;
  j["domain"] = {{"lower", problem.domain.lower}, {"upper", problem.domain.upper}};
  json rows = json::array();
  for (const auto &row : problem.A) rows.push_back(expr_strings(row));
  j["A"] = rows;
  j["b"] = expr_strings(problem.b);
  j["pi_des"] = expr_strings(problem.pi_des);
  if (problem.pi_f) j["pi_f"] = expr_strings(*problem.pi_f);
  if (problem.constants) {
    const auto &c = *problem.constants;
    j["constants"] = {{"L_a", c.L_a},           {"L_b", c.L_b},       {"L_pi_des", c.L_pi_des},
                      {"L_pi_f", c.L_pi_f},     {"U_f_bar", c.U_f_bar}};
  }
  return j.dump(2);
}

} // namespace lipsol
