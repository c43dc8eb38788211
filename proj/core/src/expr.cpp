// Copyright 2026 The FlexDiag Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "flexdiag/expr.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <utility>

#include "flexdiag/error.hpp"

namespace flexdiag {

// ---------------------------------------------------------------------------
// Domain / VariableTable

Domain Domain::boolean() { return Domain(Kind::boolean, {0, 1}); }

Domain Domain::set(std::vector<Value> values) {
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  if (values.empty()) throw ValidationError("domain must not be empty");
  return Domain(Kind::integer_set, std::move(values));
}

Domain Domain::range(Value min, Value max) {
  if (min > max) throw ValidationError("range domain has min > max");
  if (max - min >= (Value{1} << 24)) throw ValidationError("range domain is too large");
  std::vector<Value> values;
  values.reserve(static_cast<std::size_t>(max - min + 1));
  for (Value v = min; v <= max; ++v) values.push_back(v);
  return Domain(Kind::integer_range, std::move(values));
}

bool Domain::contains(Value v) const { return std::binary_search(values_.begin(), values_.end(), v); }

namespace {

bool is_keyword(std::string_view s) { return s == "and" || s == "or" || s == "not"; }

}  // namespace

bool is_identifier(std::string_view text) {
  if (text.empty()) return false;
  auto alpha = [](char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_'; };
  auto digit = [](char c) { return c >= '0' && c <= '9'; };
  if (!alpha(text.front())) return false;
  return std::all_of(text.begin() + 1, text.end(), [&](char c) { return alpha(c) || digit(c); });
}

VarIndex VariableTable::add(std::string name, Domain domain) {
  if (!is_identifier(name) || is_keyword(name)) throw ValidationError("invalid variable name '" + name + "'");
  if (by_name_.contains(name)) throw ValidationError("duplicate variable '" + name + "'");
  const auto index = static_cast<VarIndex>(vars_.size());
  by_name_.emplace(name, index);
  vars_.push_back(Variable{std::move(name), std::move(domain)});
  return index;
}

std::optional<VarIndex> VariableTable::find(std::string_view name) const {
  auto it = by_name_.find(std::string(name));
  if (it == by_name_.end()) return std::nullopt;
  return it->second;
}

VarIndex VariableTable::index_of(std::string_view name) const {
  if (auto i = find(name)) return *i;
  throw ValidationError("unknown variable '" + std::string(name) + "'");
}

// ---------------------------------------------------------------------------
// Expr / ExprBuilder

namespace {

bool equal_subtrees(std::span<const ExprNode> a, std::int32_t ia, std::span<const ExprNode> b, std::int32_t ib) {
  const ExprNode& x = a[ia];
  const ExprNode& y = b[ib];
  if (x.op != y.op || x.value != y.value) return false;
  if ((x.lhs < 0) != (y.lhs < 0) || (x.rhs < 0) != (y.rhs < 0)) return false;
  if (x.lhs >= 0 && !equal_subtrees(a, x.lhs, b, y.lhs)) return false;
  if (x.rhs >= 0 && !equal_subtrees(a, x.rhs, b, y.rhs)) return false;
  return true;
}

}  // namespace

bool operator==(const Expr& a, const Expr& b) {
  if (a.empty() || b.empty()) return a.empty() && b.empty();
  return equal_subtrees(a.nodes_, a.root(), b.nodes_, b.root());
}

std::int32_t ExprBuilder::literal(Value v) {
  nodes_.push_back({Op::literal, -1, -1, v});
  return static_cast<std::int32_t>(nodes_.size()) - 1;
}

std::int32_t ExprBuilder::variable(VarIndex v) {
  nodes_.push_back({Op::variable, -1, -1, static_cast<Value>(v)});
  return static_cast<std::int32_t>(nodes_.size()) - 1;
}

std::int32_t ExprBuilder::atom(VarIndex v) {
  nodes_.push_back({Op::atom, -1, -1, static_cast<Value>(v)});
  return static_cast<std::int32_t>(nodes_.size()) - 1;
}

std::int32_t ExprBuilder::unary(Op op, std::int32_t operand) {
  nodes_.push_back({op, operand, -1, 0});
  return static_cast<std::int32_t>(nodes_.size()) - 1;
}

std::int32_t ExprBuilder::binary(Op op, std::int32_t lhs, std::int32_t rhs) {
  nodes_.push_back({op, lhs, rhs, 0});
  return static_cast<std::int32_t>(nodes_.size()) - 1;
}

Expr ExprBuilder::build(std::int32_t root) && {
  Expr out;
  // Re-emit reachable nodes in post-order so the root lands last.
  auto emit = [&](auto&& self, std::int32_t i) -> std::int32_t {
    ExprNode n = nodes_[i];
    if (n.lhs >= 0) n.lhs = self(self, n.lhs);
    if (n.rhs >= 0) n.rhs = self(self, n.rhs);
    if (n.op == Op::variable || n.op == Op::atom) out.scope_.push_back(static_cast<VarIndex>(n.value));
    out.nodes_.push_back(n);
    return static_cast<std::int32_t>(out.nodes_.size()) - 1;
  };
  emit(emit, root);
  std::sort(out.scope_.begin(), out.scope_.end());
  out.scope_.erase(std::unique(out.scope_.begin(), out.scope_.end()), out.scope_.end());
  return out;
}

// ---------------------------------------------------------------------------
// Parser

namespace {

enum class Tok {
  end,
  ident,
  integer,
  lparen,
  rparen,
  plus,
  minus,
  eq,
  ne,
  lt,
  le,
  gt,
  ge,
  kw_and,
  kw_or,
  kw_not,
  arrow,
  double_arrow,
};

struct Token {
  Tok kind;
  std::string_view text;
  std::size_t pos;
};

std::vector<Token> tokenize(std::string_view src) {
  std::vector<Token> out;
  std::size_t i = 0;
  auto push = [&](Tok k, std::size_t len) {
    out.push_back({k, src.substr(i, len), i});
    i += len;
  };
  while (i < src.size()) {
    const char c = src[i];
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
      ++i;
      continue;
    }
    if ((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_') {
      std::size_t j = i + 1;
      while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_')) ++j;
      const auto word = src.substr(i, j - i);
      Tok k = Tok::ident;
      if (word == "and") k = Tok::kw_and;
      else if (word == "or") k = Tok::kw_or;
      else if (word == "not") k = Tok::kw_not;
      push(k, j - i);
      continue;
    }
    if (c >= '0' && c <= '9') {
      std::size_t j = i + 1;
      while (j < src.size() && src[j] >= '0' && src[j] <= '9') ++j;
      push(Tok::integer, j - i);
      continue;
    }
    const auto rest = src.substr(i);
    if (rest.starts_with("<->")) push(Tok::double_arrow, 3);
    else if (rest.starts_with("->")) push(Tok::arrow, 2);
    else if (rest.starts_with("==")) push(Tok::eq, 2);
    else if (rest.starts_with("!=")) push(Tok::ne, 2);
    else if (rest.starts_with("<=")) push(Tok::le, 2);
    else if (rest.starts_with(">=")) push(Tok::ge, 2);
    else if (c == '<') push(Tok::lt, 1);
    else if (c == '>') push(Tok::gt, 1);
    else if (c == '+') push(Tok::plus, 1);
    else if (c == '-') push(Tok::minus, 1);
    else if (c == '(') push(Tok::lparen, 1);
    else if (c == ')') push(Tok::rparen, 1);
    else throw ExpressionError(ExpressionError::Kind::syntax, i, "syntax error at " + std::to_string(i) + ": unexpected character '" + std::string(1, c) + "'");
  }
  out.push_back({Tok::end, {}, src.size()});
  return out;
}

enum class Type { integer, boolean, var_ref };

struct Parsed {
  std::int32_t node;
  Type type;
  std::size_t pos;
};

// Binding powers; higher binds tighter.
constexpr int kIff = 1;
constexpr int kImplies = 2;
constexpr int kOr = 3;
constexpr int kAnd = 4;
constexpr int kNot = 5;
constexpr int kCompare = 6;
constexpr int kAdditive = 7;
constexpr int kUnaryMinus = 8;

class Parser {
 public:
  Parser(std::string_view src, const VariableTable& vars) : tokens_(tokenize(src)), vars_(vars) {}

  Expr run() {
    if (peek().kind == Tok::end) syntax_error(peek(), "empty expression");
    Parsed p = parse(0);
    if (peek().kind != Tok::end) syntax_error(peek(), "unexpected token");
    const std::int32_t root = as_boolean(p);
    return std::move(builder_).build(root);
  }

 private:
  const Token& peek() const { return tokens_[cur_]; }
  const Token& next() { return tokens_[cur_++]; }

  [[noreturn]] static void syntax_error(const Token& t, const std::string& what) {
    const std::string near = t.kind == Tok::end ? "end of input" : "'" + std::string(t.text) + "'";
    throw ExpressionError(ExpressionError::Kind::syntax, t.pos,
                          "syntax error at " + std::to_string(t.pos) + " near " + near + ": " + what);
  }

  [[noreturn]] static void type_error(std::size_t pos, const std::string& what) {
    throw ExpressionError(ExpressionError::Kind::type, pos, "type error at " + std::to_string(pos) + ": " + what);
  }

  std::int32_t as_boolean(const Parsed& p) {
    switch (p.type) {
      case Type::boolean:
        return p.node;
      case Type::var_ref: {
        const auto var = static_cast<VarIndex>(builder_nodes_var_[p.node]);
        if (!vars_[var].domain.is_boolean())
          type_error(p.pos, "variable '" + vars_[var].name + "' is not boolean and cannot be used as a formula");
        return builder_.atom(var);
      }
      case Type::integer:
        type_error(p.pos, "integer term used where a formula is expected");
    }
    return -1;
  }

  std::int32_t as_integer(const Parsed& p) {
    if (p.type == Type::boolean) type_error(p.pos, "formula used where an integer term is expected");
    return p.node;
  }

  static int infix_power(Tok k) {
    switch (k) {
      case Tok::double_arrow: return kIff;
      case Tok::arrow: return kImplies;
      case Tok::kw_or: return kOr;
      case Tok::kw_and: return kAnd;
      case Tok::eq:
      case Tok::ne:
      case Tok::lt:
      case Tok::le:
      case Tok::gt:
      case Tok::ge: return kCompare;
      case Tok::plus:
      case Tok::minus: return kAdditive;
      default: return -1;
    }
  }

  Parsed prefix() {
    const Token& t = next();
    switch (t.kind) {
      case Tok::integer: return {builder_.literal(parse_int(t, false)), Type::integer, t.pos};
      case Tok::ident: {
        auto var = vars_.find(t.text);
        if (!var)
          throw ExpressionError(ExpressionError::Kind::unknown_variable, t.pos,
                                "unknown variable '" + std::string(t.text) + "' at " + std::to_string(t.pos));
        const std::int32_t n = builder_.variable(*var);
        builder_nodes_var_[n] = *var;
        return {n, Type::var_ref, t.pos};
      }
      case Tok::minus: {
        if (peek().kind == Tok::integer) {
          const Token& lit = next();
          return {builder_.literal(parse_int(lit, true)), Type::integer, t.pos};
        }
        Parsed operand = parse(kUnaryMinus);
        return {builder_.unary(Op::neg, as_integer(operand)), Type::integer, t.pos};
      }
      case Tok::kw_not: {
        Parsed operand = parse(kNot);
        return {builder_.unary(Op::logical_not, as_boolean(operand)), Type::boolean, t.pos};
      }
      case Tok::lparen: {
        Parsed inner = parse(0);
        if (peek().kind != Tok::rparen) syntax_error(peek(), "expected ')'");
        next();
        // A parenthesised bare variable stays a variable reference so that
        // "(x) + 1" and "(a) and b" both work.
        return {inner.node, inner.type, t.pos};
      }
      default:
        syntax_error(t, "expected a term or formula");
    }
  }

  static Value parse_int(const Token& t, bool negative) {
    std::uint64_t magnitude = 0;
    auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), magnitude);
    constexpr std::uint64_t limit = std::uint64_t{1} << 62;
    if (ec != std::errc{} || ptr != t.text.data() + t.text.size() || magnitude >= limit)
      syntax_error(t, "integer literal out of range");
    const auto v = static_cast<Value>(magnitude);
    return negative ? -v : v;
  }

  Parsed parse(int min_power) {
    Parsed lhs = prefix();
    for (;;) {
      const Token& op = peek();
      const int power = infix_power(op.kind);
      if (power < 0 || power <= min_power) break;
      next();
      switch (op.kind) {
        case Tok::double_arrow:
        case Tok::kw_or:
        case Tok::kw_and: {
          const std::int32_t l = as_boolean(lhs);
          Parsed rhs = parse(power);
          const std::int32_t r = as_boolean(rhs);
          const Op o = op.kind == Tok::double_arrow ? Op::iff : op.kind == Tok::kw_or ? Op::logical_or : Op::logical_and;
          lhs = {builder_.binary(o, l, r), Type::boolean, lhs.pos};
          break;
        }
        case Tok::arrow: {
          const std::int32_t l = as_boolean(lhs);
          Parsed rhs = parse(power - 1);  // right-assoc
          const std::int32_t r = as_boolean(rhs);
          lhs = {builder_.binary(Op::implies, l, r), Type::boolean, lhs.pos};
          break;
        }
        case Tok::plus:
        case Tok::minus: {
          const std::int32_t l = as_integer(lhs);
          Parsed rhs = parse(power);
          const std::int32_t r = as_integer(rhs);
          lhs = {builder_.binary(op.kind == Tok::plus ? Op::add : Op::sub, l, r), Type::integer, lhs.pos};
          break;
        }
        default: {  // comparison
          const std::int32_t l = as_integer(lhs);
          Parsed rhs = parse(power);
          const std::int32_t r = as_integer(rhs);
          Op o = Op::eq;
          switch (op.kind) {
            case Tok::eq: o = Op::eq; break;
            case Tok::ne: o = Op::ne; break;
            case Tok::lt: o = Op::lt; break;
            case Tok::le: o = Op::le; break;
            case Tok::gt: o = Op::gt; break;
            default: o = Op::ge; break;
          }
          lhs = {builder_.binary(o, l, r), Type::boolean, lhs.pos};
          if (infix_power(peek().kind) == kCompare) syntax_error(peek(), "comparisons are not associative");
          break;
        }
      }
    }
    return lhs;
  }

  std::vector<Token> tokens_;
  std::size_t cur_ = 0;
  const VariableTable& vars_;
  ExprBuilder builder_;
  std::unordered_map<std::int32_t, VarIndex> builder_nodes_var_;
};

}  // namespace

Expr parse_expression(std::string_view text, const VariableTable& vars) { return Parser(text, vars).run(); }

// ---------------------------------------------------------------------------
// Printer

namespace {

int precedence(Op op) {
  switch (op) {
    case Op::iff: return kIff;
    case Op::implies: return kImplies;
    case Op::logical_or: return kOr;
    case Op::logical_and: return kAnd;
    case Op::logical_not: return kNot;
    case Op::eq:
    case Op::ne:
    case Op::lt:
    case Op::le:
    case Op::gt:
    case Op::ge: return kCompare;
    case Op::add:
    case Op::sub: return kAdditive;
    case Op::neg: return kUnaryMinus;
    default: return 9;
  }
}

const char* spelling(Op op) {
  switch (op) {
    case Op::iff: return " <-> ";
    case Op::implies: return " -> ";
    case Op::logical_or: return " or ";
    case Op::logical_and: return " and ";
    case Op::eq: return " == ";
    case Op::ne: return " != ";
    case Op::lt: return " < ";
    case Op::le: return " <= ";
    case Op::gt: return " > ";
    case Op::ge: return " >= ";
    case Op::add: return " + ";
    case Op::sub: return " - ";
    default: return "";
  }
}

class Printer {
 public:
  Printer(std::span<const ExprNode> nodes, const VariableTable& vars) : nodes_(nodes), vars_(vars) {}

  void print(std::int32_t i, std::string& out) const {
    const ExprNode& n = nodes_[i];
    switch (n.op) {
      case Op::literal:
        out += std::to_string(n.value);
        return;
      case Op::variable:
      case Op::atom:
        out += vars_[static_cast<VarIndex>(n.value)].name;
        return;
      case Op::neg: {
        out += '-';
        const ExprNode& c = nodes_[n.lhs];
        // "-3" would re-parse as a negative literal.
        const bool wrap = precedence(c.op) < kUnaryMinus || (c.op == Op::literal && c.value >= 0);
        child(n.lhs, wrap, out);
        return;
      }
      case Op::logical_not:
        out += "not ";
        child(n.lhs, precedence(nodes_[n.lhs].op) < kNot, out);
        return;
      default:
        break;
    }
    const int p = precedence(n.op);
    const int pl = precedence(nodes_[n.lhs].op);
    const int pr = precedence(nodes_[n.rhs].op);
    bool wrap_l = false;
    bool wrap_r = false;
    if (n.op == Op::implies) {
      wrap_l = pl <= p;
      wrap_r = pr < p;
    } else if (p == kCompare) {
      wrap_l = pl <= p;
      wrap_r = pr <= p;
    } else {
      wrap_l = pl < p;
      wrap_r = pr <= p;
    }
    child(n.lhs, wrap_l, out);
    out += spelling(n.op);
    child(n.rhs, wrap_r, out);
  }

 private:
  void child(std::int32_t i, bool wrap, std::string& out) const {
    if (wrap) out += '(';
    print(i, out);
    if (wrap) out += ')';
  }

  std::span<const ExprNode> nodes_;
  const VariableTable& vars_;
};

}  // namespace

std::string to_string(const Expr& expr, const VariableTable& vars) {
  std::string out;
  if (!expr.empty()) Printer(expr.nodes(), vars).print(expr.root(), out);
  return out;
}

// ---------------------------------------------------------------------------
// Evaluation

namespace {

std::optional<Value> term(std::span<const ExprNode> nodes, std::int32_t i, PartialAssignment asg) {
  const ExprNode& n = nodes[i];
  switch (n.op) {
    case Op::literal: return n.value;
    case Op::variable: return asg[static_cast<std::size_t>(n.value)];
    case Op::neg: {
      auto v = term(nodes, n.lhs, asg);
      if (!v) return std::nullopt;
      return -*v;
    }
    case Op::add:
    case Op::sub: {
      auto a = term(nodes, n.lhs, asg);
      if (!a) return std::nullopt;
      auto b = term(nodes, n.rhs, asg);
      if (!b) return std::nullopt;
      return n.op == Op::add ? *a + *b : *a - *b;
    }
    default: return std::nullopt;
  }
}

Truth from_bool(bool b) { return b ? Truth::sat : Truth::unsat; }

Truth negate(Truth t) {
  if (t == Truth::sat) return Truth::unsat;
  if (t == Truth::unsat) return Truth::sat;
  return Truth::unknown;
}

Truth formula(std::span<const ExprNode> nodes, std::int32_t i, PartialAssignment asg) {
  const ExprNode& n = nodes[i];
  switch (n.op) {
    case Op::atom: {
      const auto& v = asg[static_cast<std::size_t>(n.value)];
      if (!v) return Truth::unknown;
      return from_bool(*v != 0);
    }
    case Op::logical_not: return negate(formula(nodes, n.lhs, asg));
    case Op::logical_and: {
      const Truth a = formula(nodes, n.lhs, asg);
      if (a == Truth::unsat) return a;
      const Truth b = formula(nodes, n.rhs, asg);
      if (b == Truth::unsat) return b;
      return (a == Truth::sat && b == Truth::sat) ? Truth::sat : Truth::unknown;
    }
    case Op::logical_or: {
      const Truth a = formula(nodes, n.lhs, asg);
      if (a == Truth::sat) return a;
      const Truth b = formula(nodes, n.rhs, asg);
      if (b == Truth::sat) return b;
      return (a == Truth::unsat && b == Truth::unsat) ? Truth::unsat : Truth::unknown;
    }
    case Op::implies: {
      const Truth a = formula(nodes, n.lhs, asg);
      if (a == Truth::unsat) return Truth::sat;
      const Truth b = formula(nodes, n.rhs, asg);
      if (b == Truth::sat) return Truth::sat;
      return (a == Truth::sat && b == Truth::unsat) ? Truth::unsat : Truth::unknown;
    }
    case Op::iff: {
      const Truth a = formula(nodes, n.lhs, asg);
      if (a == Truth::unknown) return a;
      const Truth b = formula(nodes, n.rhs, asg);
      if (b == Truth::unknown) return b;
      return from_bool(a == b);
    }
    default: break;
  }
  const auto a = term(nodes, n.lhs, asg);
  if (!a) return Truth::unknown;
  const auto b = term(nodes, n.rhs, asg);
  if (!b) return Truth::unknown;
  switch (n.op) {
    case Op::eq: return from_bool(*a == *b);
    case Op::ne: return from_bool(*a != *b);
    case Op::lt: return from_bool(*a < *b);
    case Op::le: return from_bool(*a <= *b);
    case Op::gt: return from_bool(*a > *b);
    case Op::ge: return from_bool(*a >= *b);
    default: return Truth::unknown;
  }
}

}  // namespace

Truth evaluate(const Expr& expr, PartialAssignment assignment) {
  if (expr.empty()) return Truth::sat;
  return formula(expr.nodes(), expr.root(), assignment);
}

}  // namespace flexdiag
