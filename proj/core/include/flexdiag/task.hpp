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

#include "flexdiag/expr.hpp"

namespace flexdiag {

using ConstraintIndex = std::uint32_t;
using ConstraintList = std::vector<ConstraintIndex>;

struct Constraint {
  std::string id;
  std::string source;  // canonical text
  Expr expr;
};

// s_i: variable = value. Kept as a first-class constraint so that a
// diagnosis is just a set of constraint ids.
struct AssignmentConstraint {
  std::string id;
  std::string variable;
  Value value;
};

// All constraints of a task over one variable table, knowledge base
// included. Indices are stable; ids are unique.
class ConstraintStore {
 public:
  ConstraintStore() = default;
  explicit ConstraintStore(VariableTable vars) : vars_(std::move(vars)) {}

  ConstraintIndex add(std::string id, Expr expr);
  ConstraintIndex add(std::string id, std::string_view text);  // parses `text`
  ConstraintIndex add_assignment(std::string id, VarIndex var, Value value);

  const VariableTable& variables() const noexcept { return vars_; }
  const Constraint& operator[](ConstraintIndex i) const { return constraints_[i]; }
  std::size_t size() const noexcept { return constraints_.size(); }

  std::optional<ConstraintIndex> find(std::string_view id) const;
  ConstraintIndex index_of(std::string_view id) const;  // throws ValidationError

  std::vector<std::string> ids(std::span<const ConstraintIndex> list) const;

 private:
  VariableTable vars_;
  std::vector<Constraint> constraints_;
  std::unordered_map<std::string, ConstraintIndex> by_id_;
};

// (V, D, C ∪ R)
struct ConfigurationTask {
  ConstraintStore store;
  ConstraintList kb;
  ConstraintList requirements;
};

// (V, D, C, S, Rρ) plus the importance ordering of S, lowest importance
// first.
struct ReconfigurationTask {
  ConstraintStore store;
  ConstraintList kb;
  ConstraintList requirements;
  ConstraintList solution;  // document order
  ConstraintList ordering;  // permutation of `solution`
  std::vector<AssignmentConstraint> assignments;  // parallel to `solution`

  // Current value of every variable, indexed by VarIndex.
  std::vector<Value> current_values() const;
  const AssignmentConstraint& assignment(ConstraintIndex s) const;  // throws ValidationError
};

struct ExprSource {
  std::string id;
  std::string text;
};

// Builds and validates a reconfiguration task. An empty `ordering` means
// document order. Throws ValidationError.
ReconfigurationTask make_reconfiguration_task(VariableTable vars, const std::vector<ExprSource>& kb,
                                              const std::vector<AssignmentConstraint>& solution,
                                              const std::vector<ExprSource>& requirements,
                                              const std::vector<std::string>& ordering = {});

// Same as above, but reusing an already-built configuration task's store.
ReconfigurationTask make_reconfiguration_task(const ConfigurationTask& config,
                                              const std::vector<AssignmentConstraint>& solution,
                                              const std::vector<ExprSource>& requirements);

ReconfigurationTask with_ordering(ReconfigurationTask task, const std::vector<std::string>& ordering);

// JSON task document I/O.
ReconfigurationTask load_task(std::string_view document);
ReconfigurationTask load_task_file(const std::string& path);
std::string task_to_json(const ReconfigurationTask& task);

// Parses an ordering file: either a JSON array of ids or whitespace separated ids.
std::vector<std::string> parse_ordering(std::string_view text);

std::string read_file(const std::string& path);

}  // namespace flexdiag
