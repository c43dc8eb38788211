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

#include "doctest.h"
#include "flexdiag/error.hpp"
#include "flexdiag/evolutionary.hpp"
#include "oracles.hpp"

using namespace flexdiag;

TEST_SUITE("evolutionary") {
  TEST_CASE("container task yields a valid diagnosis") {
    const auto task = load_task_file(oracle::data_path("container.json"));
    EvolutionParams p;
    p.generations = 200;
    p.seed = 3;
    CheckSession session;
    const Diagnosis d = evolutionary_diagnose(task, p, session);
    REQUIRE(d.status == DiagnosisStatus::found);
    ConstraintList sorted = d.elements;
    std::sort(sorted.begin(), sorted.end());
    CHECK(oracle::is_correction(task, sorted));
    CHECK(d.checks > 0);
  }

  TEST_CASE("all-ones population keeps S as the diagnosis") {
    const auto task = load_task_file(oracle::data_path("scheduling.json"));
    EvolutionParams p;
    p.generations = 1;
    p.initial_bit_probability = 1.0;
    CheckSession session;
    const Diagnosis d = evolutionary_diagnose(task, p, session);
    CHECK(d.status == DiagnosisStatus::found);
    CHECK(d.elements == task.ordering);
  }

  TEST_CASE("all-zero population stays partial") {
    const auto task = load_task_file(oracle::data_path("scheduling.json"));
    EvolutionParams p;
    p.generations = 1;
    p.initial_bit_probability = 0.0;
    CheckSession session;
    const Diagnosis d = evolutionary_diagnose(task, p, session);
    CHECK(d.status == DiagnosisStatus::partial);
  }

  TEST_CASE("same seed, same answer") {
    const auto task = load_task_file(oracle::data_path("abstract_conflicts.json"));
    EvolutionParams p;
    p.generations = 50;
    p.seed = 17;
    CheckSession a, b;
    CHECK(evolutionary_diagnose(task, p, a).elements == evolutionary_diagnose(task, p, b).elements);
  }

  TEST_CASE("not needed") {
    const auto task = load_task_file(oracle::data_path("container_consistent.json"));
    CheckSession session;
    CHECK(evolutionary_diagnose(task, {}, session).status == DiagnosisStatus::not_needed);
  }

  TEST_CASE("parameters are validated") {
    const auto task = load_task_file(oracle::data_path("container.json"));
    CheckSession session;
    EvolutionParams p;
    p.generations = 0;
    CHECK_THROWS_AS(evolutionary_diagnose(task, p, session), ValidationError);
    p = {};
    p.crossover_rate = 1.5;
    CHECK_THROWS_AS(evolutionary_diagnose(task, p, session), ValidationError);
    p = {};
    p.mutation_rate = -0.1;
    CHECK_THROWS_AS(evolutionary_diagnose(task, p, session), ValidationError);
  }

  TEST_CASE("budget") {
    const auto task = load_task_file(oracle::data_path("container.json"));
    CheckSession session(std::chrono::milliseconds(0));
    EvolutionParams p;
    p.generations = 100000;
    CHECK_THROWS_AS(evolutionary_diagnose(task, p, session), BudgetExceeded);
  }
}
