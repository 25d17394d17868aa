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

#include "lipsol/expr.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <functional>

#include "lipsol/error.hpp"

namespace lipsol {

namespace {

using NodePtr = std::shared_ptr<const Node>;

NodePtr make_node(Op op, std::vector<NodePtr> args = {}, double value = 0.0,
                  unsigned index = 0) {
  auto n = std::make_shared<Node>();
  n->op = op;
  n->value = value;
  n->index = index;
  n->args = std::move(args);
  return n;
}

class Parser {
public:
  explicit Parser(std::string_view src) : src_(src) {}

  NodePtr parse() {
    skip_ws();
    if (pos_ == src_.size()) {
      throw ParseError("empty expression", pos_);
    }
    NodePtr e = sum();
    skip_ws();
    if (pos_ != src_.size()) {
      throw ParseError(std::string("unexpected character '") + src_[pos_] + "'", pos_);
    }
    return e;
  }

private:
  void skip_ws() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) {
      ++pos_;
    }
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) {
      throw ParseError(std::string("expected '") + c + "'", pos_);
    }
  }

  NodePtr sum() {
    NodePtr lhs = product();
    for (;;) {
      if (accept('+')) {
        lhs = make_node(Op::Add, {lhs, product()});
      } else if (accept('-')) {
        lhs = make_node(Op::Sub, {lhs, product()});
      } else {
        return lhs;
      }
    }
  }

  NodePtr product() {
    NodePtr lhs = unary();
    for (;;) {
      if (accept('*')) {
        lhs = make_node(Op::Mul, {lhs, unary()});
      } else if (accept('/')) {
        lhs = make_node(Op::Div, {lhs, unary()});
      } else {
        return lhs;
      }
    }
  }

  NodePtr unary() {
    if (accept('-')) {
      return make_node(Op::Neg, {unary()});
    }
    return power();
  }

  NodePtr power() {
    NodePtr base = primary();
    if (accept('^')) {
      skip_ws();
      const std::size_t start = pos_;
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
        ++pos_;
      }
      // A digit run followed by '.', 'e' or 'E' is a real literal, not an integer.
      if (start == pos_ ||
          (pos_ < src_.size() && (src_[pos_] == '.' || src_[pos_] == 'e' || src_[pos_] == 'E'))) {
        throw ParseError("exponent must be a nonnegative integer literal", start);
      }
      unsigned exponent = 0;
      auto [ptr, ec] = std::from_chars(src_.data() + start, src_.data() + pos_, exponent);
      if (ec != std::errc()) {
        throw ParseError("exponent out of range", start);
      }
      return make_node(Op::Pow, {base}, 0.0, exponent);
    }
    return base;
  }

  NodePtr number() {
    const std::size_t start = pos_;
    auto digits = [&] {
      std::size_t n = 0;
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
        ++pos_;
        ++n;
      }
      return n;
    };
    std::size_t mantissa = digits();
    if (pos_ < src_.size() && src_[pos_] == '.') {
      ++pos_;
      mantissa += digits();
    }
    if (mantissa == 0) {
      throw ParseError("malformed number", start);
    }
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      ++pos_;
      if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) {
        ++pos_;
      }
      if (digits() == 0) {
        throw ParseError("malformed exponent in number", start);
      }
    }
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(src_.data() + start, src_.data() + pos_, v);
    if (ec != std::errc() || ptr != src_.data() + pos_ || !std::isfinite(v)) {
      throw ParseError("number out of range", start);
    }
    return make_node(Op::Number, {}, v);
  }

  std::vector<NodePtr> call_args() {
    expect('(');
    std::vector<NodePtr> args{sum()};
    while (accept(',')) {
      args.push_back(sum());
    }
    expect(')');
    return args;
  }

  NodePtr primary() {
    skip_ws();
    if (pos_ == src_.size()) {
      throw ParseError("unexpected end of input", pos_);
    }
    const char c = src_[pos_];
    if (c == '(') {
      ++pos_;
      NodePtr e = sum();
      expect(')');
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      return number();
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      const std::size_t start = pos_;
      while (pos_ < src_.size() && std::isalnum(static_cast<unsigned char>(src_[pos_]))) {
        ++pos_;
      }
      const std::string ident(src_.substr(start, pos_ - start));
      if (ident == "abs" || ident == "sqrt" || ident == "min" || ident == "max") {
        auto args = call_args();
        const bool unary_fn = ident == "abs" || ident == "sqrt";
        if (unary_fn && args.size() != 1) {
          throw ParseError("arity mismatch: " + ident + " takes 1 argument, got " +
                               std::to_string(args.size()),
                           start);
        }
        if (ident == "abs") return make_node(Op::Abs, std::move(args));
        if (ident == "sqrt") return make_node(Op::Sqrt, std::move(args));
        if (ident == "min") return make_node(Op::Min, std::move(args));
        return make_node(Op::Max, std::move(args));
      }
      if ((ident[0] == 'x' || ident[0] == 'u') && ident.size() > 1 &&
          std::all_of(ident.begin() + 1, ident.end(),
                      [](char d) { return std::isdigit(static_cast<unsigned char>(d)); })) {
        unsigned idx = 0;
        auto [ptr, ec] = std::from_chars(ident.data() + 1, ident.data() + ident.size(), idx);
        if (ec == std::errc() && idx >= 1) {
          return make_node(ident[0] == 'x' ? Op::XVar : Op::UVar, {}, 0.0, idx);
        }
      }
      throw ParseError("unknown identifier '" + ident + "'", start);
    }
    throw ParseError(std::string("unexpected character '") + c + "'", pos_);
  }

  std::string_view src_;
  std::size_t pos_ = 0;
};

double ipow(double base, unsigned e) {
  double result = 1.0;
  while (e != 0) {
    if (e & 1u) result *= base;
    base *= base;
    e >>= 1u;
  }
  return result;
}

double eval(const Node &n, std::span<const double> x, std::span<const double> u) {
  switch (n.op) {
  case Op::Number:
    return n.value;
  case Op::XVar:
    if (n.index > x.size()) {
      throw EvalError("missing parameter variable x" + std::to_string(n.index));
    }
    return x[n.index - 1];
  case Op::UVar:
    if (n.index > u.size()) {
      throw EvalError("missing input variable u" + std::to_string(n.index));
    }
    return u[n.index - 1];
  case Op::Neg:
    return -eval(*n.args[0], x, u);
  case Op::Abs:
    return std::abs(eval(*n.args[0], x, u));
  case Op::Sqrt: {
    const double a = eval(*n.args[0], x, u);
    if (a < 0.0) {
      throw EvalError("sqrt of negative argument");
    }
    return std::sqrt(a);
  }
  case Op::Add:
    return eval(*n.args[0], x, u) + eval(*n.args[1], x, u);
  case Op::Sub:
    return eval(*n.args[0], x, u) - eval(*n.args[1], x, u);
  case Op::Mul:
    return eval(*n.args[0], x, u) * eval(*n.args[1], x, u);
  case Op::Div: {
    const double num = eval(*n.args[0], x, u);
    const double den = eval(*n.args[1], x, u);
    if (den == 0.0) {
      throw EvalError("division by zero");
    }
    return num / den;
  }
  case Op::Pow:
    return ipow(eval(*n.args[0], x, u), n.index);
  case Op::Min:
  case Op::Max: {
    double acc = eval(*n.args[0], x, u);
    for (std::size_t i = 1; i < n.args.size(); ++i) {
      const double v = eval(*n.args[i], x, u);
      acc = n.op == Op::Min ? std::min(acc, v) : std::max(acc, v);
    }
    return acc;
  }
  }
  throw EvalError("corrupt expression node");
}

int precedence(Op op) {
  switch (op) {
  case Op::Add:
  case Op::Sub:
    return 1;
  case Op::Mul:
  case Op::Div:
    return 2;
  case Op::Neg:
    return 3;
  case Op::Pow:
    return 4;
  default:
    return 5;
  }
}

std::string format_number(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

void print(const Node &n, std::string &out) {
  auto wrapped = [&out](const Node &child, bool parens) {
    if (parens) out += '(';
    print(child, out);
    if (parens) out += ')';
  };
  switch (n.op) {
  case Op::Number:
    out += format_number(n.value);
    return;
  case Op::XVar:
    out += 'x' + std::to_string(n.index);
    return;
  case Op::UVar:
    out += 'u' + std::to_string(n.index);
    return;
  case Op::Neg:
    out += '-';
    wrapped(*n.args[0], precedence(n.args[0]->op) < precedence(Op::Neg));
    return;
  case Op::Pow:
    wrapped(*n.args[0], precedence(n.args[0]->op) <= precedence(Op::Pow));
    out += '^' + std::to_string(n.index);
    return;
  case Op::Add:
  case Op::Sub:
  case Op::Mul:
  case Op::Div: {
    const int p = precedence(n.op);
    static constexpr char symbols[] = {'+', '-', '*', '/'};
    wrapped(*n.args[0], precedence(n.args[0]->op) < p);
    out += ' ';
    out += symbols[static_cast<int>(n.op) - static_cast<int>(Op::Add)];
    out += ' ';
    wrapped(*n.args[1], precedence(n.args[1]->op) <= p);
    return;
  }
  case Op::Abs:
  case Op::Sqrt:
  case Op::Min:
  case Op::Max: {
    out += n.op == Op::Abs ? "abs(" : n.op == Op::Sqrt ? "sqrt(" : n.op == Op::Min ? "min(" : "max(";
    for (std::size_t i = 0; i < n.args.size(); ++i) {
      if (i) out += ", ";
      print(*n.args[i], out);
    }
    out += ')';
    return;
  }
  }
}

void collect(const Node &n, FreeVars &fv) {
  if (n.op == Op::XVar) fv.x.insert(n.index);
  if (n.op == Op::UVar) fv.u.insert(n.index);
  for (const auto &a : n.args) collect(*a, fv);
}

bool same(const Node &a, const Node &b) {
  if (a.op != b.op || a.args.size() != b.args.size()) return false;
  if (a.op == Op::Number && a.value != b.value) return false;
  if ((a.op == Op::XVar || a.op == Op::UVar || a.op == Op::Pow) && a.index != b.index) {
    return false;
  }
  for (std::size_t i = 0; i < a.args.size(); ++i) {
    if (!same(*a.args[i], *b.args[i])) return false;
  }
  return true;
}

} // namespace

Expression Expression::parse(std::string_view source) {
  return Expression(Parser(source).parse());
}

Expression Expression::number(double v) { return Expression(make_node(Op::Number, {}, v)); }
Expression Expression::x(unsigned index) { return Expression(make_node(Op::XVar, {}, 0.0, index)); }
Expression Expression::u(unsigned index) { return Expression(make_node(Op::UVar, {}, 0.0, index)); }

Expression Expression::unary(Op op, const Expression &arg) {
  if (op != Op::Neg && op != Op::Abs && op != Op::Sqrt) {
    throw Error("not a unary operator");
  }
  return Expression(make_node(op, {arg.root_}));
}

Expression Expression::binary(Op op, const Expression &lhs, const Expression &rhs) {
  if (op != Op::Add && op != Op::Sub && op != Op::Mul && op != Op::Div) {
    throw Error("not a binary operator");
  }
  return Expression(make_node(op, {lhs.root_, rhs.root_}));
}

Expression Expression::power(const Expression &base, unsigned exponent) {
  return Expression(make_node(Op::Pow, {base.root_}, 0.0, exponent));
}

Expression Expression::nary(Op op, const std::vector<Expression> &args) {
  if ((op != Op::Min && op != Op::Max) || args.empty()) {
    throw Error("min/max need at least one argument");
  }
  std::vector<NodePtr> nodes;
  nodes.reserve(args.size());
  for (const auto &a : args) nodes.push_back(a.root_);
  return Expression(make_node(op, std::move(nodes)));
}

double Expression::evaluate(std::span<const double> x, std::span<const double> u) const {
  return eval(*root_, x, u);
}

FreeVars Expression::free_vars() const {
  FreeVars fv;
  collect(*root_, fv);
  return fv;
}

std::string Expression::to_string() const {
  std::string out;
  print(*root_, out);
  return out;
}

bool operator==(const Expression &a, const Expression &b) { return same(*a.root_, *b.root_); }

} // namespace lipsol
