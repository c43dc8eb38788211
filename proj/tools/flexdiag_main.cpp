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

// flexdiag command-line tool.
//
// Exit codes: 0 found (or success), 1 parse/validation error, 2 no diagnosis
// exists (or estimate out of range), 3 reconfiguration not needed, 4 time
// budget exceeded.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "flexdiag/bench.hpp"
#include "flexdiag/error.hpp"
#include "flexdiag/feature_model.hpp"
#include "flexdiag/flexdiag.hpp"
#include "flexdiag/reconfigure.hpp"
#include "json.hpp"

namespace {

using namespace flexdiag;

enum Exit { ok = 0, invalid = 1, none_exists = 2, not_needed = 3, over_budget = 4 };

int exit_for(DiagnosisStatus s) {
  switch (s) {
    case DiagnosisStatus::found: return ok;
    case DiagnosisStatus::none_exists: return none_exists;
    case DiagnosisStatus::not_needed: return not_needed;
    case DiagnosisStatus::partial: return ok;
  }
  return invalid;
}

struct TaskOptions {
  std::string path;
  int m = 1;
  std::optional<long> budget_ms;
  std::string ordering = "default";
};

void add_task_options(CLI::App* cmd, TaskOptions& opt) {
  cmd->add_option("task", opt.path, "Task JSON file")->required()->check(CLI::ExistingFile);
  cmd->add_option("--m", opt.m, "Granularity (block size); 1 gives minimal diagnoses")->check(CLI::PositiveNumber);
  cmd->add_option("--budget-ms", opt.budget_ms, "Time budget in milliseconds")->check(CLI::NonNegativeNumber);
  cmd->add_option("--ordering", opt.ordering,
                  "File listing the solution ids, lowest importance first, or 'default' for document order");
}

ReconfigurationTask load(const TaskOptions& opt) {
  ReconfigurationTask task = load_task_file(opt.path);
  if (opt.ordering != "default") task = with_ordering(std::move(task), parse_ordering(read_file(opt.ordering)));
  return task;
}

CheckSession session_for(const TaskOptions& opt) {
  if (opt.budget_ms) return CheckSession(std::chrono::milliseconds(*opt.budget_ms));
  return CheckSession(std::nullopt);
}

int budget_exceeded(const CheckSession& session) {
  nlohmann::ordered_json j;
  j["status"] = "budget-exceeded";
  j["checks"] = session.checks();
  j["elapsed_ms"] = std::chrono::duration<double, std::milli>(session.elapsed()).count();
  std::cout << j.dump(2) << "\n";
  std::cerr << "flexdiag: time budget exceeded\n";
  return over_budget;
}

void explain_none(const ReconfigurationTask& task) {
  CheckSession session;
  for (const auto& line : validate_task(task, session).messages) std::cerr << "flexdiag: " << line << "\n";
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write '" + path + "'");
  out << text;
}

int cmd_diagnose(const TaskOptions& opt) {
  const ReconfigurationTask task = load(opt);
  CheckSession session = session_for(opt);
  try {
    const Diagnosis d = diagnose(task, Granularity(opt.m), session, {.precheck = true});
    std::cout << diagnosis_to_json(d, task.store, task.solution.size());
    if (d.status == DiagnosisStatus::none_exists) explain_none(task);
    return exit_for(d.status);
  } catch (const BudgetExceeded&) {
    return budget_exceeded(session);
  }
}

int cmd_reconfigure(const TaskOptions& opt) {
  const ReconfigurationTask task = load(opt);
  CheckSession session = session_for(opt);
  try {
    const Reconfiguration r = reconfigure(task, Granularity(opt.m), session);
    std::cout << reconfiguration_to_json(r, task);
    return exit_for(r.delta.status);
  } catch (const NoDiagnosisExists&) {
    std::cout << "{\n  \"status\": \"none-exists\"\n}\n";
    explain_none(task);
    return none_exists;
  } catch (const BudgetExceeded&) {
    return budget_exceeded(session);
  }
}

int cmd_enumerate(const TaskOptions& opt, std::optional<std::size_t> k) {
  const ReconfigurationTask task = load(opt);
  CheckSession session = session_for(opt);
  try {
    const auto all = enumerate_diagnoses(task, Granularity(opt.m), k.value_or(kUnlimited), session);
    std::cout << diagnoses_to_json(all, task);
    if (all.size() == 1 && all.front().status == DiagnosisStatus::not_needed) return not_needed;
    return ok;
  } catch (const NoDiagnosisExists&) {
    std::cout << "[]\n";
    explain_none(task);
    return none_exists;
  } catch (const BudgetExceeded&) {
    return budget_exceeded(session);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"FlexDiag anytime diagnosis and reconfiguration"};
  app.require_subcommand(1);

  TaskOptions diag_opt;
  auto* diag = app.add_subcommand("diagnose", "Compute one diagnosis of a reconfiguration task");
  add_task_options(diag, diag_opt);

  TaskOptions reconf_opt;
  auto* reconf = app.add_subcommand("reconfigure", "Diagnose and compute a repaired configuration");
  add_task_options(reconf, reconf_opt);

  TaskOptions enum_opt;
  std::optional<std::size_t> enum_k;
  auto* enumerate = app.add_subcommand("enumerate", "Enumerate diagnoses breadth-first");
  add_task_options(enumerate, enum_opt);
  enumerate->add_option("--k", enum_k, "Maximum number of diagnoses (default: all)")->check(CLI::PositiveNumber);

  std::string bench_config;
  std::string bench_out;
  std::optional<unsigned> bench_threads;
  auto* bench = app.add_subcommand("bench", "Run a benchmark suite and write CSV");
  bench->add_option("config", bench_config, "Suite JSON file")->required()->check(CLI::ExistingFile);
  bench->add_option("--out", bench_out, "CSV output file (default: stdout)");
  bench->add_option("--threads", bench_threads, "Worker threads")->check(CLI::PositiveNumber);

  GenerationParams gen;
  std::string gen_out;
  auto* gen_fm = app.add_subcommand("gen-fm", "Generate a random feature model in SXFM");
  gen_fm->add_option("--features", gen.num_features, "Number of features")->capture_default_str();
  gen_fm->add_option("--ctc", gen.ctc_fraction, "Cross-tree constraints per feature")->capture_default_str();
  gen_fm->add_option("--max-children", gen.max_children, "Maximum children per feature")->capture_default_str();
  gen_fm->add_option("--seed", gen.seed, "Random seed")->capture_default_str();
  gen_fm->add_option("--out", gen_out, "Output file (default: stdout)");

  std::string conv_in;
  std::string conv_out;
  std::uint64_t conv_seed = 1;
  double conv_fraction = 0.3;
  auto* convert = app.add_subcommand("convert", "Turn an SXFM model into a reconfiguration task");
  convert->add_option("sxfm", conv_in, "SXFM feature model")->required()->check(CLI::ExistingFile);
  convert->add_option("--seed", conv_seed, "Seed for the current configuration and the requirements")
      ->capture_default_str();
  convert->add_option("--fraction", conv_fraction, "Share of variables constrained by new requirements")
      ->capture_default_str();
  convert->add_option("--out", conv_out, "Task JSON output file (default: stdout)");

  std::uint64_t est_n = 0, est_delta = 0, est_m = 1;
  auto* estimate = app.add_subcommand("estimate", "Worst-case consistency checks for |S|, |diagnosis| and m");
  estimate->add_option("--n", est_n, "|S|")->required();
  estimate->add_option("--delta", est_delta, "Diagnosis size")->required();
  estimate->add_option("--m", est_m, "Granularity")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return invalid;
  }

  try {
    if (*diag) return cmd_diagnose(diag_opt);
    if (*reconf) return cmd_reconfigure(reconf_opt);
    if (*enumerate) return cmd_enumerate(enum_opt, enum_k);
    if (*bench) {
      SuiteConfig cfg =
          parse_suite_config(read_file(bench_config), std::filesystem::path(bench_config).parent_path().string());
      if (bench_threads) cfg.threads = *bench_threads;
      const SuiteResult result = run_suite(cfg);
      write_output(bench_out, suite_to_csv(result));
      const auto failed = std::count_if(result.rows.begin(), result.rows.end(),
                                        [](const ScenarioResult& r) { return !r.error.empty(); });
      std::cerr << "flexdiag: " << result.rows.size() << " rows, " << failed << " with errors\n";
      return ok;
    }
    if (*gen_fm) {
      write_output(gen_out, write_sxfm(generate_random_fm(gen)));
      return ok;
    }
    if (*convert) {
      const FeatureModel fm = parse_sxfm(read_file(conv_in));
      const auto current = sample_configuration(fm, conv_seed);
      const auto requirements =
          generate_reconfig_requirements(fm, current, conv_fraction, derive_seed(conv_seed, {1}));
      write_output(conv_out, task_to_json(make_fm_reconfiguration_task(fm, current, requirements)));
      return ok;
    }
    if (*estimate) {
      try {
        std::cout << estimate_checks(est_n, est_delta, est_m) << "\n";
        return ok;
      } catch (const OutOfRange& e) {
        std::cout << "n/a\n";
        std::cerr << "flexdiag: " << e.what() << "\n";
        return none_exists;
      }
    }
  } catch (const BudgetExceeded& e) {
    std::cerr << "flexdiag: " << e.what() << "\n";
    return over_budget;
  } catch (const OutOfRange& e) {
    std::cerr << "flexdiag: " << e.what() << "\n";
    return invalid;
  } catch (const Error& e) {
    std::cerr << "flexdiag: " << e.what() << "\n";
    return invalid;
  }
  return invalid;
}
