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

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <string>

#include "doctest.h"
#include "flexdiag/task.hpp"
#include "json.hpp"
#include "oracles.hpp"

namespace {

struct Run {
  int code = -1;
  std::string out;
};

// Runs the CLI with stderr discarded.
Run cli(const std::string& args) {
  const std::string command = std::string(FLEXDIAG_CLI) + " " + args + " 2>/dev/null";
  Run r;
  FILE* pipe = popen(command.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 4096> buf{};
  while (std::size_t n = std::fread(buf.data(), 1, buf.size(), pipe)) r.out.append(buf.data(), n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string data(const std::string& f) { return oracle::data_path(f); }

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "flexdiag_cli_tests";
  std::filesystem::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("diagnose") {
    const Run m1 = cli("diagnose " + data("container.json") + " --m 1");
    CHECK(m1.code == 0);
    CHECK(nlohmann::json::parse(m1.out)["delta"] == nlohmann::json::array({"s1", "s3", "s4"}));
    const Run m2 = cli("diagnose " + data("container.json") + " --m 2");
    CHECK(nlohmann::json::parse(m2.out)["delta"] == nlohmann::json::array({"s1", "s2", "s3", "s4"}));
    CHECK(cli("diagnose " + data("container_consistent.json")).code == 3);
    CHECK(cli("diagnose " + data("container_incomplete.json")).code == 1);
    CHECK(cli("diagnose /nonexistent.json").code == 1);
    CHECK(cli("diagnose " + data("container.json") + " --m 0").code == 1);
    CHECK(cli("diagnose " + data("container.json") + " --unknown").code == 1);
    CHECK(cli("").code == 1);
  }

  TEST_CASE("diagnose with an ordering file") {
    const auto order = scratch("order.txt");
    std::FILE* f = std::fopen(order.c_str(), "w");
    std::fputs("s2 s1 s3 s4 s5 s6 s7 s8\n", f);
    std::fclose(f);
    const Run r = cli("diagnose " + data("container.json") + " --ordering " + order.string());
    CHECK(r.code == 0);
    CHECK(nlohmann::json::parse(r.out)["delta"] == nlohmann::json::array({"s2", "s3", "s4"}));
  }

  TEST_CASE("none exists") {
    auto doc = nlohmann::json::parse(flexdiag::read_file(data("container.json")));
    doc["requirements"].push_back({{"id", "r3"}, {"expr", "pc != games"}});
    const auto path = scratch("impossible.json");
    std::FILE* f = std::fopen(path.c_str(), "w");
    std::fputs(doc.dump().c_str(), f);
    std::fclose(f);
    CHECK(cli("diagnose " + path.string()).code == 2);
    CHECK(cli("reconfigure " + path.string()).code == 2);
    CHECK(cli("enumerate " + path.string()).code == 2);
  }

  TEST_CASE("budget") {
    const Run r = cli("diagnose " + data("scheduling.json") + " --budget-ms 0");
    CHECK(r.code == 4);
    CHECK(nlohmann::json::parse(r.out)["status"] == "budget-exceeded");
  }

  TEST_CASE("estimate") {
    CHECK(cli("estimate --n 16 --delta 4 --m 2").out == "16\n");
    CHECK(cli("estimate --n 16 --delta 1 --m 1").out == "10\n");
    const Run dash = cli("estimate --n 16 --delta 8 --m 4");
    CHECK(dash.out == "n/a\n");
    CHECK(dash.code == 2);
  }

  TEST_CASE("reconfigure") {
    const Run r = cli("reconfigure " + data("scheduling.json") + " --m 1");
    CHECK(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["repaired"]["o3m3"].get<int>() < 5);
    for (const auto& c : j["changed"]) CHECK(c["old"] != c["new"]);
    CHECK(j["changed"].size() + j["unchanged_in_delta"].size() == j["delta"].size());
    CHECK(cli("reconfigure " + data("container_consistent.json")).code == 3);
  }

  TEST_CASE("enumerate") {
    const Run r = cli("enumerate " + data("container.json") + " --m 1 --k 10");
    CHECK(r.code == 0);
    CHECK(nlohmann::json::parse(r.out).size() == 2);
    CHECK(nlohmann::json::parse(cli("enumerate " + data("container.json") + " --k 1").out).size() == 1);
  }

  TEST_CASE("gen-fm is deterministic") {
    const Run a = cli("gen-fm --features 20 --ctc 0.1 --seed 42");
    const Run b = cli("gen-fm --features 20 --ctc 0.1 --seed 42");
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
    CHECK(a.out.find("<feature_tree>") != std::string::npos);
    const auto file = scratch("gen.xml");
    CHECK(cli("gen-fm --features 20 --ctc 0.1 --seed 42 --out " + file.string()).code == 0);
    CHECK(flexdiag::read_file(file.string()) == a.out);
    CHECK(cli("gen-fm --features 1").code == 1);
  }

  TEST_CASE("convert then diagnose") {
    const auto task = scratch("phone_task.json");
    CHECK(cli("convert " + data("fm/mobile_phone.xml") + " --seed 5 --fraction 0.5 --out " + task.string()).code == 0);
    const auto loaded = flexdiag::load_task_file(task.string());
    CHECK(loaded.solution.size() == 11);
    CHECK(loaded.requirements.size() == 6);
    const int code = cli("diagnose " + task.string()).code;
    CHECK((code == 0 || code == 3));
    CHECK(cli("convert " + data("fm/mobile_phone.xml") + " --seed 5 --fraction 0.5").out ==
          flexdiag::read_file(task.string()));
  }

  TEST_CASE("bench") {
    const auto out = scratch("mini.csv");
    CHECK(cli("bench " + data("bench/mini_suite.json") + " --out " + out.string()).code == 0);
    const std::string csv = flexdiag::read_file(out.string());
    CHECK(csv.rfind("model_id,num_vars,", 0) == 0);
    CHECK(csv.find("group_vars,m,") != std::string::npos);
  }
}
