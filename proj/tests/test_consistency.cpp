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

#include <chrono>
#include <random>
#include <thread>

#include "doctest.h"
#include "flexdiag/consistency.hpp"
#include "flexdiag/error.hpp"
#include "flexdiag/task.hpp"
#include "oracles.hpp"

using namespace flexdiag;

namespace {

// Random small CSPs: 3..6 variables over {0,1,2}, binary and ternary
// constraints.
ConstraintStore random_store(std::mt19937_64& rng, ConstraintList& all) {
  VariableTable vars;
  const int n = 3 + static_cast<int>(rng() % 4);
  for (int i = 0; i < n; ++i) vars.add("v" + std::to_string(i), Domain::range(0, 2));
  ConstraintStore store(vars);
  const int m = 2 + static_cast<int>(rng() % 7);
  for (int c = 0; c < m; ++c) {
    const auto a = "v" + std::to_string(rng() % n);
    const auto b = "v" + std::to_string(rng() % n);
    const auto k = std::to_string(rng() % 4);
    std::string text;
    switch (rng() % 5) {
      case 0: text = a + " != " + b; break;
      case 1: text = a + " + " + b + " == " + k; break;
      case 2: text = a + " < " + b + " or " + a + " == " + k; break;
      case 3: text = "not (" + a + " == " + k + " and " + b + " == " + k + ")"; break;
      default: text = a + " - " + b + " >= 1 -> v0 == " + k; break;
    }
    all.push_back(store.add("c" + std::to_string(c), text));
  }
  return store;
}

}  // namespace

TEST_SUITE("consistency") {
  TEST_CASE("solver agrees with exhaustive enumeration") {
    std::mt19937_64 rng(2024);
    for (int round = 0; round < 300; ++round) {
      ConstraintList all;
      const ConstraintStore store = random_store(rng, all);
      // every prefix of the constraint list
      for (std::size_t k = 0; k <= all.size(); ++k) {
        const ConstraintList part(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(k));
        CheckSession session;
        const bool expected = oracle::consistent(store, part);
        CHECK(is_consistent(store, part, session) == expected);
        const auto solution = solve(store, part, session);
        CHECK(solution.has_value() == expected);
        if (solution) CHECK(satisfies(store, part, *solution));
      }
    }
  }

  TEST_CASE("seeded value order still finds valid solutions") {
    std::mt19937_64 rng(99);
    for (int round = 0; round < 100; ++round) {
      ConstraintList all;
      const ConstraintStore store = random_store(rng, all);
      CheckSession session;
      const auto a = solve(store, all, session, {.value_seed = 1});
      const auto b = solve(store, all, session, {.value_seed = 1});
      CHECK(a == b);
      if (a) CHECK(oracle::holds(store[all[0]].expr, a->values));
    }
  }

  TEST_CASE("every call counts exactly once, cache hits included") {
    const auto task = load_task_file(oracle::data_path("container.json"));
    CheckSession session;
    CHECK(session.checks() == 0);
    is_consistent(task.store, task.kb, session);
    CHECK(session.checks() == 1);
    is_consistent(task.store, task.kb, session);
    CHECK(session.checks() == 2);
    CHECK(session.cache_hits() == 1);
    solve(task.store, task.kb, session);
    CHECK(session.checks() == 2);

    CheckSession uncached(std::nullopt, false);
    is_consistent(task.store, task.kb, uncached);
    is_consistent(task.store, task.kb, uncached);
    CHECK(uncached.checks() == 2);
    CHECK(uncached.cache_hits() == 0);
  }

  TEST_CASE("constraint order does not matter for the cache") {
    const auto task = load_task_file(oracle::data_path("container.json"));
    ConstraintList reversed(task.kb.rbegin(), task.kb.rend());
    CheckSession session;
    CHECK(is_consistent(task.store, task.kb, session) == is_consistent(task.store, reversed, session));
    CHECK(session.cache_hits() == 1);
  }

  TEST_CASE("budget") {
    // a pigeonhole instance keeps the search busy long enough to notice
    VariableTable vars;
    const int n = 11;
    for (int i = 0; i < n; ++i) vars.add("p" + std::to_string(i), Domain::range(1, n - 1));
    ConstraintStore store(vars);
    ConstraintList all;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        all.push_back(store.add("d" + std::to_string(i) + "_" + std::to_string(j),
                                "p" + std::to_string(i) + " != p" + std::to_string(j)));
    CheckSession session(std::chrono::milliseconds(20));
    CHECK_THROWS_AS(is_consistent(store, all, session), BudgetExceeded);

    CheckSession expired(std::chrono::milliseconds(0));
    std::this_thread::sleep_for(std::chrono::milliseconds(2));
    const auto task = load_task_file(oracle::data_path("container.json"));
    CHECK_THROWS_AS(is_consistent(task.store, task.kb, expired), BudgetExceeded);
  }

  TEST_CASE("empty constraint set is consistent") {
    const auto task = load_task_file(oracle::data_path("container.json"));
    CheckSession session;
    CHECK(is_consistent(task.store, {}, session));
  }
}
