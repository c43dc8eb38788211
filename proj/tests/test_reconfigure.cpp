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

#include <algorithm>
#include <set>

#include "doctest.h"
#include "flexdiag/error.hpp"
#include "flexdiag/reconfigure.hpp"
#include "json.hpp"
#include "oracles.hpp"

using namespace flexdiag;

namespace {

std::set<ConstraintList> as_sets(const std::vector<Diagnosis>& ds) {
  std::set<ConstraintList> out;
  for (const auto& d : ds) {
    ConstraintList l = d.elements;
    std::sort(l.begin(), l.end());
    out.insert(l);
  }
  return out;
}

}  // namespace

TEST_SUITE("reconfigure") {
  TEST_CASE("validation report") {
    const auto task = load_task_file(oracle::data_path("container.json"));
    CheckSession session;
    const ValidationReport r = validate_task(task, session);
    CHECK(r.kb_consistent);
    CHECK(r.requirements_consistent);
    CHECK(r.solution_complete);
    CHECK(r.reconfiguration_needed);
    CHECK(r.ready());
    CHECK(r.messages.size() == 4);

    const auto fine = load_task_file(oracle::data_path("container_consistent.json"));
    CHECK_FALSE(validate_task(fine, session).reconfiguration_needed);
  }

  TEST_CASE("scheduling repair") {
    const auto task = load_task_file(oracle::data_path("scheduling.json"));
    CheckSession session;
    const Reconfiguration r = reconfigure(task, Granularity(1), session);
    CHECK(task.store.ids(r.delta.elements) == std::vector<std::string>{"s1", "s2", "s3", "s7", "s8", "s9"});

    ConstraintList constraints = task.kb;
    constraints.insert(constraints.end(), task.requirements.begin(), task.requirements.end());
    CHECK(satisfies(task.store, constraints, r.repaired));
    for (const auto& c : constraints) CHECK(oracle::holds(task.store[c].expr, r.repaired.values));

    const auto current = task.current_values();
    std::set<std::string> delta_vars;
    for (auto s : r.delta.elements) delta_vars.insert(task.assignment(s).variable);
    for (VarIndex v = 0; v < current.size(); ++v) {
      const auto& name = task.store.variables()[v].name;
      if (!delta_vars.count(name)) CHECK(r.repaired.values[v] == current[v]);
    }
    // changed lists exactly the Δ variables whose value moved
    std::set<std::string> changed;
    for (const auto& c : r.changed) {
      changed.insert(c.variable);
      CHECK(c.old_value != c.new_value);
      CHECK(r.repaired.values[task.store.variables().index_of(c.variable)] == c.new_value);
    }
    for (const auto& name : delta_vars) {
      const VarIndex v = task.store.variables().index_of(name);
      CHECK(changed.count(name) == (r.repaired.values[v] != current[v] ? 1u : 0u));
    }
    CHECK(changed.size() + r.unchanged_in_delta.size() == delta_vars.size());
  }

  TEST_CASE("repair at coarse granularity") {
    const auto task = load_task_file(oracle::data_path("scheduling.json"));
    CheckSession session;
    const Reconfiguration r = reconfigure(task, Granularity(2), session);
    ConstraintList constraints = task.kb;
    constraints.insert(constraints.end(), task.requirements.begin(), task.requirements.end());
    CHECK(satisfies(task.store, constraints, r.repaired));
  }

  TEST_CASE("nothing to repair") {
    const auto task = load_task_file(oracle::data_path("container_consistent.json"));
    CheckSession session;
    const Reconfiguration r = reconfigure(task, Granularity(1), session);
    CHECK(r.delta.status == DiagnosisStatus::not_needed);
    CHECK(r.repaired.values == task.current_values());
    CHECK(r.changed.empty());
  }

  TEST_CASE("impossible requirements") {
    auto doc = nlohmann::json::parse(read_file(oracle::data_path("container.json")));
    doc["requirements"].push_back({{"id", "r3"}, {"expr", "pc != games"}});
    const auto task = load_task(doc.dump());
    CheckSession session;
    CHECK_THROWS_AS(reconfigure(task, Granularity(1), session), NoDiagnosisExists);
    CHECK_THROWS_AS(enumerate_diagnoses(task, Granularity(1), 5, session), NoDiagnosisExists);
    CHECK_FALSE(validate_task(task, session).requirements_consistent);
  }

  TEST_CASE("enumeration on the container task") {
    const auto task = load_task_file(oracle::data_path("container.json"));
    CheckSession session;
    const auto all = enumerate_diagnoses(task, Granularity(1), kUnlimited, session);
    CHECK(as_sets(all) == oracle::min_diagnoses(task));
    CHECK(all.size() == 2);
    CHECK(enumerate_diagnoses(task, Granularity(1), 1, session).size() == 1);
    CHECK(enumerate_diagnoses(task, Granularity(1), 0, session).empty());
  }

  TEST_CASE("enumeration on injected conflicts") {
    const auto task = load_task_file(oracle::data_path("abstract_conflicts.json"));
    CheckSession session;
    const auto all = enumerate_diagnoses(task, Granularity(1), kUnlimited, session);
    CHECK(as_sets(all) == oracle::min_diagnoses(task));
    CHECK(all.size() == 4);
  }

  TEST_CASE("enumeration matches the oracle on the micro corpus") {
    const auto doc = nlohmann::json::parse(read_file(oracle::data_path("micro/oracle.json")));
    for (const auto& entry : doc) {
      const auto task = load_task_file(oracle::data_path("micro/" + entry.at("task").get<std::string>()));
      const auto expected = oracle::min_diagnoses(task);
      CAPTURE(entry.at("task").get<std::string>());
      CheckSession session;
      if (expected.empty()) {
        CHECK_THROWS_AS(enumerate_diagnoses(task, Granularity(1), kUnlimited, session), NoDiagnosisExists);
        continue;
      }
      CHECK(as_sets(enumerate_diagnoses(task, Granularity(1), kUnlimited, session)) == expected);
      // coarser labels still yield correction subsets without supersets among them
      for (const auto& d : as_sets(enumerate_diagnoses(task, Granularity(2), kUnlimited, session)))
        CHECK(oracle::is_correction(task, d));
    }
  }

  TEST_CASE("json documents") {
    const auto task = load_task_file(oracle::data_path("scheduling.json"));
    CheckSession session;
    const auto r = nlohmann::json::parse(reconfiguration_to_json(reconfigure(task, Granularity(1), session), task));
    CHECK(r["status"] == "found");
    CHECK(r["repaired"]["o3m3"].get<int>() < 5);
    CHECK(r["changed"].size() == 6);
    const auto v = nlohmann::json::parse(validation_to_json(validate_task(task, session)));
    CHECK(v["reconfiguration_needed"] == true);
  }
}
