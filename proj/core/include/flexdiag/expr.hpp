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

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace flexdiag {

using Value = std::int64_t;
using VarIndex = std::uint32_t;

// A finite integer domain. Booleans are the domain {0, 1}.
class Domain {
 public:
  enum class Kind { boolean, integer_set, integer_range };

  static Domain boolean();
  static Domain set(std::vector<Value> values);
  static Domain range(Value min, Value max);

  Kind kind() const noexcept { return kind_; }
  bool is_boolean() const noexcept { return kind_ == Kind::boolean; }
  // Sorted ascending, no duplicates, never empty.
  const std::vector<Value>& values() const noexcept { return values_; }
  bool contains(Value v) const;
  std::size_t size() const noexcept { return values_.size(); }

  bool operator==(const Domain&) const = default;

 private:
  Domain(Kind kind, std::vector<Value> values) : kind_(kind), values_(std::move(values)) {}

  Kind kind_;
  std::vector<Value> values_;
};

struct Variable {
  std::string name;
  Domain domain;
};

bool is_identifier(std::string_view text);

// Ordered variable declarations with name lookup. Declaration order is the
// solver's static variable order.
class VariableTable {
 public:
  VarIndex add(std::string name, Domain domain);

  std::optional<VarIndex> find(std::string_view name) const;
  VarIndex index_of(std::string_view name) const;  // throws ValidationError

  const Variable& operator[](VarIndex i) const { return vars_[i]; }
  std::size_t size() const noexcept { return vars_.size(); }
  bool empty() const noexcept { return vars_.empty(); }
  auto begin() const { return vars_.begin(); }
  auto end() const { return vars_.end(); }

 private:
  std::vector<Variable> vars_;
  std::unordered_map<std::string, VarIndex> by_name_;
};

enum class Op : std::uint8_t {
  // integer terms
  literal,
  variable,
  add,
  sub,
  neg,
  // comparisons
  eq,
  ne,
  lt,
  le,
  gt,
  ge,
  // boolean formulas
  atom,
  logical_not,
  logical_and,
  logical_or,
  implies,
  iff,
};

struct ExprNode {
  Op op;
  std::int32_t lhs = -1;  // child node index
  std::int32_t rhs = -1;
  Value value = 0;        // literal value, or variable index for variable/atom
};

// Expression tree stored as a post-order node arena; the root is the last
// node. Immutable once built by the parser.
class Expr {
 public:
  Expr() = default;

  std::span<const ExprNode> nodes() const noexcept { return nodes_; }
  std::int32_t root() const noexcept { return static_cast<std::int32_t>(nodes_.size()) - 1; }
  bool empty() const noexcept { return nodes_.empty(); }

  // Sorted, duplicate-free list of referenced variables.
  const std::vector<VarIndex>& scope() const noexcept { return scope_; }

  // Structural equality.
  friend bool operator==(const Expr& a, const Expr& b);

 private:
  friend class ExprBuilder;
  std::vector<ExprNode> nodes_;
  std::vector<VarIndex> scope_;
};

// Low-level construction used by the parser and by tests that need to build
// trees directly. Children must be added before their parents.
class ExprBuilder {
 public:
  std::int32_t literal(Value v);
  std::int32_t variable(VarIndex v);
  std::int32_t atom(VarIndex v);
  std::int32_t unary(Op op, std::int32_t operand);
  std::int32_t binary(Op op, std::int32_t lhs, std::int32_t rhs);

  // Finishes the tree rooted at `root`; nodes not reachable from it are dropped.
  Expr build(std::int32_t root) &&;

 private:
  std::vector<ExprNode> nodes_;
};

// Parses a boolean constraint formula. Precedence from loosest to tightest:
// `<->`, `->` (right-assoc), `or`, `and`, `not`, comparisons (non-assoc),
// binary `+`/`-`, unary `-`. Throws ExpressionError.
Expr parse_expression(std::string_view text, const VariableTable& vars);

// Canonical text with the minimal parentheses needed to re-parse to the same tree.
std::string to_string(const Expr& expr, const VariableTable& vars);

enum class Truth : std::uint8_t { sat, unsat, unknown };

using PartialAssignment = std::span<const std::optional<Value>>;

// Kleene three-valued evaluation. Any comparison whose terms reference an
// unassigned variable is unknown; connectives short-circuit on determined
// operands. Full assignments always yield sat or unsat.
Truth evaluate(const Expr& expr, PartialAssignment assignment);

}  // namespace flexdiag
