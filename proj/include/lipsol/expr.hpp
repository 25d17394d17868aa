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

#ifndef LIPSOL_EXPR_HPP
#define LIPSOL_EXPR_HPP

#include <memory>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace lipsol {

/// Scalar expression language used in problem files.
///
/// Grammar (whitespace insignificant, no implicit multiplication):
///
///     sum     := product (('+' | '-') product)*
///     product := unary (('*' | '/') unary)*
///     unary   := '-' unary | power
///     power   := primary ('^' INTEGER)?
///     primary := NUMBER | x<k> | u<k> | '(' sum ')'
///              | abs '(' sum ')' | sqrt '(' sum ')'
///              | min '(' sum (',' sum)* ')' | max '(' sum (',' sum)* ')'
///
/// Variables are 1-based: x1..xn are parameters, u1..um inputs.
enum class Op { Number, XVar, UVar, Neg, Abs, Sqrt, Add, Sub, Mul, Div, Pow, Min, Max };

struct Node {
  Op op = Op::Number;
  double value = 0.0;  // Number literal
  unsigned index = 0;  // variable index (XVar, UVar) or exponent (Pow)
  std::vector<std::shared_ptr<const Node>> args;
};

struct FreeVars {
  std::set<unsigned> x;
  std::set<unsigned> u;
};

class Expression {
public:
  static Expression parse(std::string_view source);

  // Builders, mainly for tests and programmatic construction.
  static Expression number(double v);
  static Expression x(unsigned index);
  static Expression u(unsigned index);
  static Expression unary(Op op, const Expression &arg);
  static Expression binary(Op op, const Expression &lhs, const Expression &rhs);
  static Expression power(const Expression &base, unsigned exponent);
  static Expression nary(Op op, const std::vector<Expression> &args);

  /// Throws EvalError on sqrt of a negative, division by zero, or a
  /// variable index outside the supplied vectors.
  double evaluate(std::span<const double> x,
                  std::span<const double> u = {}) const;

  FreeVars free_vars() const;

  /// Infix text that parses back to a structurally identical tree.
  std::string to_string() const;

  const Node &root() const { return *root_; }

  friend bool operator==(const Expression &a, const Expression &b);

private:
  explicit Expression(std::shared_ptr<const Node> root) : root_(std::move(root)) {}
  std::shared_ptr<const Node> root_;
};

} // namespace lipsol

#endif // LIPSOL_EXPR_HPP
