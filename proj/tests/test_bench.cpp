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

#include <sstream>

#include "doctest.h"
#include "flexdiag/bench.hpp"
#include "flexdiag/error.hpp"
#include "oracles.hpp"

using namespace flexdiag;

namespace {

// Drops the elapsed_ms and mean_time_ms columns.
std::string without_time(const std::string& csv) {
  std::istringstream in(csv);
  std::string line, out;
  int time_column = -1;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (line.empty()) {
      time_column = -1;
    } else if (time_column < 0) {
      for (std::size_t i = 0; i < cells.size(); ++i)
        if (cells[i] == "elapsed_ms" || cells[i] == "mean_time_ms") time_column = static_cast<int>(i);
    }
    for (std::size_t i = 0; i < cells.size(); ++i)
      if (static_cast<int>(i) != time_column) out += cells[i] + ",";
    out += "\n";
  }
  return out;
}

SuiteConfig tiny_suite() {
  SuiteConfig cfg;
  SuiteModel model;
  model.id = "fm20";
  model.generate = GenerationParams{};
  model.generate->num_features = 20;
  model.generate->seed = 0;
  cfg.models.push_back(model);
  cfg.m_values = {1, 2};
  cfg.fractions = {0.5};
  cfg.reorderings = 2;
  cfg.repeats = 1;
  cfg.master_seed = 11;
  return cfg;
}

}  // namespace

TEST_SUITE("bench") {
  TEST_CASE("scenario on the container task") {
    const auto task = load_task_file(oracle::data_path("container.json"));
    const SessionFactory sessions = [] { return CheckSession(); };
    const auto rows = run_scenario(task, 2, 3, {"container", 1.0, 1, 0}, sessions);
    REQUIRE(rows.size() == 3);
    for (int i = 0; i < 3; ++i) {
      CHECK(rows[i].repeat_index == i + 1);
      CHECK(rows[i].delta_size == 4);
      CHECK(rows[i].minimality == doctest::Approx(0.75));
      CHECK(rows[i].accuracy == 1.0);
      CHECK(rows[i].checks == rows[0].checks);
      CHECK(rows[i].error.empty());
    }
    const auto exact = run_scenario(task, 1, 2, {"container", 1.0, 1, 0}, sessions);
    for (const auto& r : exact) {
      CHECK(r.minimality == 1.0);
      CHECK(r.accuracy == 1.0);
    }
    CHECK(run_scenario(task, 1, 1, {}, sessions).size() == 1);
    CHECK_THROWS_AS(run_scenario(task, 1, 0, {}, sessions), ValidationError);
  }

  TEST_CASE("not-needed rows carry an error") {
    const auto task = load_task_file(oracle::data_path("container_consistent.json"));
    const auto rows = run_scenario(task, 1, 1, {}, [] { return CheckSession(); });
    CHECK(rows[0].error == "not-needed");
  }

  TEST_CASE("suite cardinality") {
    const SuiteResult r = run_suite(tiny_suite());
    CHECK(r.rows.size() == 4);
    CHECK(r.summary.size() == 2);
    for (const auto& s : r.summary)
      if (s.m == 1) CHECK(s.mean_minimality == 1.0);
    const std::string csv = suite_to_csv(r);
    CHECK(csv.rfind(
              "model_id,num_vars,num_constraints,m,fraction,reorder_index,repeat_index,delta_size,checks,elapsed_ms,"
              "minimality,accuracy,seed,error\n",
              0) == 0);
    CHECK(csv.find("\ngroup_vars,m,mean_delta_size,mean_checks,mean_time_ms,mean_minimality,mean_accuracy,n\n") !=
          std::string::npos);
  }

  TEST_CASE("rows follow configuration order") {
    SuiteConfig cfg = tiny_suite();
    cfg.m_values = {4, 1, 2};
    cfg.threads = 3;
    const SuiteResult r = run_suite(cfg);
    REQUIRE(r.rows.size() == 6);
    CHECK(r.rows[0].m == 4);
    CHECK(r.rows[1].m == 1);
    CHECK(r.rows[2].m == 2);
    CHECK(r.rows[3].reorder_index == 2);
  }

  TEST_CASE("frozen mini suite is reproducible") {
    const std::string path = oracle::data_path("bench/mini_suite.json");
    const SuiteConfig cfg = parse_suite_config(read_file(path), oracle::data_path("bench"));
    const std::string a = suite_to_csv(run_suite(cfg));
    SuiteConfig threaded = cfg;
    threaded.threads = 4;
    const std::string b = suite_to_csv(run_suite(threaded));
    CHECK(without_time(a) == without_time(b));
    CHECK(run_suite(cfg).rows.size() == 2 * 2 * 2 * 3 * 2);
  }

  TEST_CASE("failures stay in their rows") {
    SuiteConfig cfg = tiny_suite();
    SuiteModel missing;
    missing.id = "missing";
    missing.sxfm_path = "/nonexistent/model.xml";
    cfg.models.push_back(missing);
    const SuiteResult r = run_suite(cfg);
    CHECK(r.rows.size() == 8);
    CHECK(r.rows[4].model_id == "missing");
    CHECK_FALSE(r.rows[4].error.empty());
    CHECK(r.rows[0].error.empty());
  }

  TEST_CASE("config parsing") {
    const auto cfg = parse_suite_config(
        R"({"models": [{"id": "a", "generate": {"features": 12, "seed": 5}}], "m": [1, 3], "fractions": [0.5],
            "reorderings": 1, "repeats": 1, "seed": 3, "reorder": "none", "budget_ms": 500,
            "evolutionary": {"generations": 5, "population": 6}})");
    CHECK(cfg.models[0].generate->num_features == 12);
    CHECK(cfg.models[0].generate->seed == 5);
    CHECK(cfg.m_values == std::vector<int>{1, 3});
    CHECK(cfg.reorder == ReorderTarget::none);
    CHECK(cfg.budget == std::chrono::milliseconds(500));
    CHECK(cfg.evolutionary->generations == 5);
    const SuiteResult r = run_suite(cfg);
    CHECK(r.evolutionary.size() == 1);
    CHECK(suite_to_csv(r).find("\nmodel_id,num_vars,fraction,reorder_index,delta_size") != std::string::npos);

    CHECK_THROWS_AS(parse_suite_config("{}"), ValidationError);
    CHECK_THROWS_AS(parse_suite_config(R"({"models": []})"), ValidationError);
    CHECK_THROWS_AS(parse_suite_config(R"({"models": [{"id": "a"}]})"), ValidationError);
    CHECK_THROWS_AS(parse_suite_config(R"({"models": [{"id": "a", "generate": {}}], "m": [0]})"), ValidationError);
    CHECK_THROWS_AS(parse_suite_config(R"({"models": [{"id": "a", "generate": {}}], "fractions": [0]})"),
                    ValidationError);
  }

  TEST_CASE("reordering requirements leaves diagnoses unchanged") {
    SuiteConfig by_req = tiny_suite();
    by_req.reorder = ReorderTarget::requirements;
    SuiteConfig fixed = tiny_suite();
    fixed.reorder = ReorderTarget::none;
    const SuiteResult a = run_suite(by_req);
    const SuiteResult b = run_suite(fixed);
    REQUIRE(a.rows.size() == b.rows.size());
    for (std::size_t i = 0; i < a.rows.size(); ++i) {
      CHECK(a.rows[i].delta_size == b.rows[i].delta_size);
      CHECK(a.rows[i].minimality == b.rows[i].minimality);
    }
    CHECK(parse_suite_config(R"({"models": [{"id": "a", "generate": {}}], "reorder": "requirements"})").reorder ==
          ReorderTarget::requirements);
  }

  TEST_CASE("seed derivation") {
    CHECK(derive_seed(1, {2, 3}) == derive_seed(1, {2, 3}));
    CHECK(derive_seed(1, {2, 3}) != derive_seed(1, {3, 2}));
    CHECK(derive_seed(1, {2}) != derive_seed(2, {2}));
  }
}
