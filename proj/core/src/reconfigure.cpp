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

#include "flexdiag/reconfigure.hpp"

#include <algorithm>
#include <deque>
#include <set>

#include "flexdiag/error.hpp"
#include "json.hpp"

namespace flexdiag {

ValidationReport validate_task(const ReconfigurationTask& task, CheckSession& session) {
  ValidationReport report;
  const auto& store = task.store;

  report.kb_consistent = is_consistent(store, task.kb, session);
  report.messages.push_back(report.kb_consistent ? "knowledge base is consistent"
                                                 : "knowledge base is inconsistent");

  const ConstraintList background = sorted_union(task.kb, task.requirements);
  report.requirements_consistent = report.kb_consistent && is_consistent(store, background, session);
  report.messages.push_back(report.requirements_consistent
                                ? "requirements are consistent with the knowledge base"
                                : "requirements are inconsistent with the knowledge base: requirements must be revised");

  std::vector<bool> assigned(store.variables().size(), false);
  for (const auto& a : task.assignments)
    if (auto v = store.variables().find(a.variable)) assigned[*v] = true;
  report.solution_complete = task.solution.size() == store.variables().size() &&
                             std::all_of(assigned.begin(), assigned.end(), [](bool b) { return b; });
  report.messages.push_back(report.solution_complete ? "configuration is complete" : "configuration is incomplete");

  if (report.requirements_consistent) {
    report.reconfiguration_needed = !is_consistent(store, sorted_union(background, task.solution), session);
    report.messages.push_back(report.reconfiguration_needed
                                  ? "configuration violates the new requirements: reconfiguration needed"
                                  : "configuration already satisfies the new requirements");
  }
  return report;
}

Reconfiguration reconfigure(const ReconfigurationTask& task, Granularity m, CheckSession& session) {
  const auto started = CheckSession::Clock::now();
  Reconfiguration out;
  out.delta = diagnose(task, m, session, {.precheck = true});

  if (out.delta.status == DiagnosisStatus::none_exists) throw NoDiagnosisExists();
  if (out.delta.status == DiagnosisStatus::not_needed) {
    out.repaired.values = task.current_values();
    out.elapsed = std::chrono::duration_cast<std::chrono::nanoseconds>(CheckSession::Clock::now() - started);
    return out;
  }

  const ConstraintList kept = sorted_difference(sorted_union(task.solution, {}), out.delta.elements);
  const ConstraintList constraints = sorted_union(sorted_union(task.kb, task.requirements), kept);
  auto repaired = solve(task.store, constraints, session);
  if (!repaired) throw Error("diagnosis does not restore consistency; no repaired configuration exists");
  out.repaired = std::move(*repaired);

  for (auto s : out.delta.elements) {
    const auto& a = task.assignment(s);
    const Value now = out.repaired.values[task.store.variables().index_of(a.variable)];
    if (now != a.value) out.changed.push_back({a.variable, a.value, now});
    else out.unchanged_in_delta.push_back(a.variable);
  }
  out.elapsed = std::chrono::duration_cast<std::chrono::nanoseconds>(CheckSession::Clock::now() - started);
  return out;
}

std::vector<Diagnosis> enumerate_diagnoses(const ReconfigurationTask& task, Granularity m, std::size_t max_count,
                                           CheckSession& session) {
  std::vector<Diagnosis> found;
  if (max_count == 0) return found;

  Diagnosis root = diagnose(task, m, session, {.precheck = true});
  if (root.status == DiagnosisStatus::none_exists) throw NoDiagnosisExists();
  if (root.status == DiagnosisStatus::not_needed) return {root};

  found.push_back(root);
  std::deque<ConstraintList> queue;
  std::set<ConstraintList> seen;
  std::vector<ConstraintList> closed;

  const auto expand = [&](const ConstraintList& path, const ConstraintList& label) {
    for (auto e : label) {
      ConstraintList child = sorted_union(path, std::span<const ConstraintIndex>(&e, 1));
      if (seen.insert(child).second) queue.push_back(std::move(child));
    }
  };
  expand({}, root.elements);

  while (!queue.empty() && found.size() < max_count) {
    const ConstraintList path = std::move(queue.front());
    queue.pop_front();

    const bool prunable = std::any_of(closed.begin(), closed.end(), [&](const ConstraintList& c) {
      return std::includes(path.begin(), path.end(), c.begin(), c.end());
    });
    if (prunable) continue;

    // Reuse an earlier diagnosis that avoids every element on the path.
    const Diagnosis* reuse = nullptr;
    for (const auto& d : found) {
      const bool disjoint = std::none_of(d.elements.begin(), d.elements.end(), [&](ConstraintIndex e) {
        return std::binary_search(path.begin(), path.end(), e);
      });
      if (disjoint) {
        reuse = &d;
        break;
      }
    }
    ConstraintList label;
    if (reuse) {
      label = reuse->elements;
    } else {
      ConstraintList candidates;
      for (auto s : task.ordering)
        if (!std::binary_search(path.begin(), path.end(), s)) candidates.push_back(s);
      const ConstraintList background = sorted_union(task.requirements, path);
      Diagnosis d = diagnose(task.store, candidates, task.kb, background, m, session);
      if (d.status != DiagnosisStatus::found) {
        closed.push_back(path);
        continue;
      }
      label = d.elements;
      const bool duplicate = std::any_of(found.begin(), found.end(), [&](const Diagnosis& f) {
        return sorted_union(f.elements, {}) == sorted_union(d.elements, {});
      });
      if (!duplicate) found.push_back(std::move(d));
    }
    expand(path, label);
  }

  // Granularity above one can label nodes with non-minimal diagnoses; drop
  // any result that strictly contains another.
  std::vector<ConstraintList> sets;
  for (const auto& d : found) sets.push_back(sorted_union(d.elements, {}));
  std::vector<Diagnosis> out;
  for (std::size_t i = 0; i < found.size(); ++i) {
    const bool superset = std::any_of(sets.begin(), sets.end(), [&](const ConstraintList& other) {
      return other.size() < sets[i].size() && std::includes(sets[i].begin(), sets[i].end(), other.begin(), other.end());
    });
    if (!superset) out.push_back(std::move(found[i]));
  }
  if (out.size() > max_count) out.resize(max_count);
  return out;
}

namespace {

nlohmann::ordered_json diagnosis_json(const Diagnosis& d, const ConstraintStore& store) {
  nlohmann::ordered_json j;
  j["status"] = std::string(to_string(d.status));
  j["delta"] = store.ids(d.elements);
  j["m"] = d.m;
  j["checks"] = d.checks;
  j["guard_checks"] = d.guard_checks;
  j["elapsed_ms"] = std::chrono::duration<double, std::milli>(d.elapsed).count();
  return j;
}

}  // namespace

std::string reconfiguration_to_json(const Reconfiguration& r, const ReconfigurationTask& task) {
  const auto& vars = task.store.variables();
  nlohmann::ordered_json doc;
  doc["status"] = std::string(to_string(r.delta.status));
  doc["delta"] = task.store.ids(r.delta.elements);
  doc["changed"] = nlohmann::ordered_json::array();
  for (const auto& c : r.changed) doc["changed"].push_back({{"var", c.variable}, {"old", c.old_value}, {"new", c.new_value}});
  doc["unchanged_in_delta"] = r.unchanged_in_delta;
  nlohmann::ordered_json repaired = nlohmann::ordered_json::object();
  for (VarIndex v = 0; v < vars.size() && v < r.repaired.values.size(); ++v) repaired[vars[v].name] = r.repaired.values[v];
  doc["repaired"] = repaired;
  doc["checks"] = r.delta.total_checks();
  doc["elapsed_ms"] = std::chrono::duration<double, std::milli>(r.elapsed).count();
  return doc.dump(2) + "\n";
}

std::string validation_to_json(const ValidationReport& report) {
  nlohmann::ordered_json doc;
  doc["kb_consistent"] = report.kb_consistent;
  doc["requirements_consistent"] = report.requirements_consistent;
  doc["solution_complete"] = report.solution_complete;
  doc["reconfiguration_needed"] = report.reconfiguration_needed;
  doc["messages"] = report.messages;
  return doc.dump(2) + "\n";
}

std::string diagnoses_to_json(const std::vector<Diagnosis>& diagnoses, const ReconfigurationTask& task) {
  nlohmann::ordered_json doc = nlohmann::ordered_json::array();
  for (const auto& d : diagnoses) doc.push_back(diagnosis_json(d, task.store));
  return doc.dump(2) + "\n";
}

}  // namespace flexdiag
