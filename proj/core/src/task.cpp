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

#include "flexdiag/task.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "flexdiag/error.hpp"
#include "json.hpp"

namespace flexdiag {

using nlohmann::json;

ConstraintIndex ConstraintStore::add(std::string id, Expr expr) {
  if (!is_identifier(id)) throw ValidationError("invalid constraint id '" + id + "'");
  if (by_id_.contains(id)) throw ValidationError("duplicate id '" + id + "'");
  const auto index = static_cast<ConstraintIndex>(constraints_.size());
  by_id_.emplace(id, index);
  std::string source = to_string(expr, vars_);
  constraints_.push_back(Constraint{std::move(id), std::move(source), std::move(expr)});
  return index;
}

ConstraintIndex ConstraintStore::add(std::string id, std::string_view text) {
  return add(std::move(id), parse_expression(text, vars_));
}

ConstraintIndex ConstraintStore::add_assignment(std::string id, VarIndex var, Value value) {
  const Variable& v = vars_[var];
  if (!v.domain.contains(value))
    throw ValidationError("value " + std::to_string(value) + " for '" + v.name + "' is out of domain");
  ExprBuilder b;
  const auto lhs = b.variable(var);
  const auto rhs = b.literal(value);
  return add(std::move(id), std::move(b).build(b.binary(Op::eq, lhs, rhs)));
}

std::optional<ConstraintIndex> ConstraintStore::find(std::string_view id) const {
  auto it = by_id_.find(std::string(id));
  if (it == by_id_.end()) return std::nullopt;
  return it->second;
}

ConstraintIndex ConstraintStore::index_of(std::string_view id) const {
  if (auto i = find(id)) return *i;
  throw ValidationError("unknown constraint id '" + std::string(id) + "'");
}

std::vector<std::string> ConstraintStore::ids(std::span<const ConstraintIndex> list) const {
  std::vector<std::string> out;
  out.reserve(list.size());
  for (auto i : list) out.push_back(constraints_[i].id);
  return out;
}

std::vector<Value> ReconfigurationTask::current_values() const {
  std::vector<Value> values(store.variables().size(), 0);
  for (const auto& a : assignments) values[store.variables().index_of(a.variable)] = a.value;
  return values;
}

const AssignmentConstraint& ReconfigurationTask::assignment(ConstraintIndex s) const {
  auto it = std::find(solution.begin(), solution.end(), s);
  if (it == solution.end()) throw ValidationError("constraint '" + store[s].id + "' is not part of the solution");
  return assignments[static_cast<std::size_t>(it - solution.begin())];
}

namespace {

void attach_solution(ReconfigurationTask& task, const std::vector<AssignmentConstraint>& solution) {
  const auto& vars = task.store.variables();
  std::vector<bool> seen(vars.size(), false);
  for (const auto& a : solution) {
    const auto var = vars.find(a.variable);
    if (!var) throw ValidationError("solution entry '" + a.id + "' names unknown variable '" + a.variable + "'");
    if (seen[*var]) throw ValidationError("variable '" + a.variable + "' is assigned more than once");
    seen[*var] = true;
    task.solution.push_back(task.store.add_assignment(a.id, *var, a.value));
    task.assignments.push_back(a);
  }
  for (VarIndex v = 0; v < vars.size(); ++v)
    if (!seen[v]) throw ValidationError("incomplete solution: variable '" + vars[v].name + "' has no assignment");
}

}  // namespace

ReconfigurationTask with_ordering(ReconfigurationTask task, const std::vector<std::string>& ordering) {
  if (ordering.empty()) {
    task.ordering = task.solution;
    return task;
  }
  if (ordering.size() != task.solution.size())
    throw ValidationError("ordering must be a permutation of the solution ids");
  ConstraintList order;
  std::unordered_set<ConstraintIndex> used;
  for (const auto& id : ordering) {
    const auto idx = task.store.find(id);
    if (!idx || std::find(task.solution.begin(), task.solution.end(), *idx) == task.solution.end())
      throw ValidationError("ordering names '" + id + "', which is not a solution id");
    if (!used.insert(*idx).second) throw ValidationError("ordering repeats '" + id + "'");
    order.push_back(*idx);
  }
  task.ordering = std::move(order);
  return task;
}

ReconfigurationTask make_reconfiguration_task(VariableTable vars, const std::vector<ExprSource>& kb,
                                              const std::vector<AssignmentConstraint>& solution,
                                              const std::vector<ExprSource>& requirements,
                                              const std::vector<std::string>& ordering) {
  if (vars.empty()) throw ValidationError("task declares no variables");
  ReconfigurationTask task;
  task.store = ConstraintStore(std::move(vars));
  for (const auto& c : kb) task.kb.push_back(task.store.add(c.id, c.text));
  for (const auto& r : requirements) task.requirements.push_back(task.store.add(r.id, r.text));
  attach_solution(task, solution);
  return with_ordering(std::move(task), ordering);
}

ReconfigurationTask make_reconfiguration_task(const ConfigurationTask& config,
                                              const std::vector<AssignmentConstraint>& solution,
                                              const std::vector<ExprSource>& requirements) {
  ReconfigurationTask task;
  task.store = config.store;
  task.kb = config.kb;
  task.requirements = config.requirements;
  for (const auto& r : requirements) task.requirements.push_back(task.store.add(r.id, r.text));
  attach_solution(task, solution);
  return with_ordering(std::move(task), {});
}

// ---------------------------------------------------------------------------
// JSON

namespace {

[[noreturn]] void schema(const std::string& what) { throw ValidationError("schema violation: " + what); }

const json& field(const json& obj, const char* name, const std::string& where) {
  if (!obj.is_object()) schema(where + " must be an object");
  auto it = obj.find(name);
  if (it == obj.end()) schema(where + " is missing \"" + name + "\"");
  return *it;
}

std::string string_field(const json& obj, const char* name, const std::string& where) {
  const json& v = field(obj, name, where);
  if (!v.is_string()) schema(where + "." + name + " must be a string");
  return v.get<std::string>();
}

Value int_value(const json& v, const std::string& where) {
  if (!v.is_number_integer()) schema(where + " must be an integer");
  return v.get<Value>();
}

const json& array_field(const json& obj, const char* name) {
  const json& v = field(obj, name, "task");
  if (!v.is_array()) schema(std::string("\"") + name + "\" must be an array");
  return v;
}

Domain parse_domain(const json& d, const std::string& where) {
  const std::string kind = string_field(d, "kind", where);
  if (kind == "bool") return Domain::boolean();
  if (kind == "set") {
    const json& values = field(d, "values", where);
    if (!values.is_array() || values.empty()) schema(where + ".values must be a non-empty array");
    std::vector<Value> out;
    for (const auto& v : values) out.push_back(int_value(v, where + ".values[]"));
    return Domain::set(std::move(out));
  }
  if (kind == "range")
    return Domain::range(int_value(field(d, "min", where), where + ".min"), int_value(field(d, "max", where), where + ".max"));
  schema(where + ".kind must be one of bool, set, range");
}

std::vector<ExprSource> parse_exprs(const json& arr, const std::string& where) {
  std::vector<ExprSource> out;
  for (const auto& e : arr) out.push_back({string_field(e, "id", where), string_field(e, "expr", where)});
  return out;
}

}  // namespace

ReconfigurationTask load_task(std::string_view document) {
  json doc;
  try {
    doc = json::parse(document);
  } catch (const json::parse_error& e) {
    schema(std::string("not valid JSON (") + e.what() + ")");
  }
  if (!doc.is_object()) schema("task document must be a JSON object");

  VariableTable vars;
  for (const auto& v : array_field(doc, "variables")) {
    const std::string name = string_field(v, "name", "variable");
    vars.add(name, parse_domain(field(v, "domain", "variable '" + name + "'"), "variable '" + name + "'.domain"));
  }

  std::vector<AssignmentConstraint> solution;
  for (const auto& s : array_field(doc, "solution"))
    solution.push_back({string_field(s, "id", "solution entry"), string_field(s, "var", "solution entry"),
                        int_value(field(s, "value", "solution entry"), "solution entry value")});

  std::vector<std::string> ordering;
  if (auto it = doc.find("ordering"); it != doc.end() && !it->is_null()) {
    if (!it->is_array()) schema("\"ordering\" must be an array of ids");
    for (const auto& id : *it) {
      if (!id.is_string()) schema("\"ordering\" must be an array of ids");
      ordering.push_back(id.get<std::string>());
    }
  }

  return make_reconfiguration_task(std::move(vars), parse_exprs(array_field(doc, "kb"), "kb entry"), solution,
                                   parse_exprs(array_field(doc, "requirements"), "requirement"), ordering);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ReconfigurationTask load_task_file(const std::string& path) { return load_task(read_file(path)); }

std::string task_to_json(const ReconfigurationTask& task) {
  const auto& vars = task.store.variables();
  json doc;
  doc["variables"] = json::array();
  for (const auto& v : vars) {
    json d;
    switch (v.domain.kind()) {
      case Domain::Kind::boolean:
        d["kind"] = "bool";
        break;
      case Domain::Kind::integer_range:
        d["kind"] = "range";
        d["min"] = v.domain.values().front();
        d["max"] = v.domain.values().back();
        break;
      case Domain::Kind::integer_set:
        d["kind"] = "set";
        d["values"] = v.domain.values();
        break;
    }
    doc["variables"].push_back({{"name", v.name}, {"domain", d}});
  }
  auto exprs = [&](const ConstraintList& list) {
    json arr = json::array();
    for (auto i : list) arr.push_back({{"id", task.store[i].id}, {"expr", task.store[i].source}});
    return arr;
  };
  doc["kb"] = exprs(task.kb);
  doc["solution"] = json::array();
  for (const auto& a : task.assignments) doc["solution"].push_back({{"id", a.id}, {"var", a.variable}, {"value", a.value}});
  doc["requirements"] = exprs(task.requirements);
  doc["ordering"] = task.store.ids(task.ordering);
  return doc.dump(2) + "\n";
}

std::vector<std::string> parse_ordering(std::string_view text) {
  std::vector<std::string> out;
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string_view::npos && text[first] == '[') {
    json arr;
    try {
      arr = json::parse(text);
    } catch (const json::parse_error& e) {
      schema(std::string("ordering is not valid JSON (") + e.what() + ")");
    }
    for (const auto& id : arr) {
      if (!id.is_string()) schema("ordering entries must be strings");
      out.push_back(id.get<std::string>());
    }
    return out;
  }
  std::istringstream in{std::string(text)};
  std::string id;
  while (in >> id) out.push_back(id);
  return out;
}

}  // namespace flexdiag
