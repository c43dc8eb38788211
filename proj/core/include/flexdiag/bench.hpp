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

#include <chrono>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "flexdiag/evolutionary.hpp"
#include "flexdiag/feature_model.hpp"
#include "flexdiag/metrics.hpp"

namespace flexdiag {

using SessionFactory = std::function<CheckSession()>;

// Identifies the cell a scenario belongs to; copied into every row.
struct ScenarioLabel {
  std::string model_id;
  double fraction = 0.0;
  int reorder_index = 1;
  std::uint64_t seed = 0;
};

// `repeats` diagnosis runs at granularity m, each with a fresh session. The
// reference Δ_min comes from `delta_min` when given and from one m = 1 run
// otherwise. Throws ValidationError for repeats < 1; engine errors
// propagate.
std::vector<ScenarioResult> run_scenario(const ReconfigurationTask& task, int m, int repeats,
                                         const ScenarioLabel& label, const SessionFactory& sessions,
                                         const std::optional<ConstraintList>& delta_min = std::nullopt);

// What each reordering permutes. FlexDiag reads S in order, so only
// `solution` changes the diagnosis that comes out.
enum class ReorderTarget { solution, requirements, none };

struct SuiteModel {
  std::string id;
  std::optional<std::string> sxfm_path;
  std::optional<GenerationParams> generate;  // seed 0: derived from the master seed
};

struct SuiteConfig {
  std::vector<SuiteModel> models;
  std::vector<int> m_values{1, 2, 4, 6, 10};
  std::vector<double> fractions{0.1, 0.3, 0.5, 1.0};
  int reorderings = 10;
  int repeats = 3;
  std::uint64_t master_seed = 1;
  ReorderTarget reorder = ReorderTarget::solution;
  std::optional<std::chrono::milliseconds> budget;
  unsigned threads = 1;
  std::optional<EvolutionParams> evolutionary;  // adds a comparison section when set

  void validate() const;  // throws ValidationError
};

// Suite JSON:
//   {"models": [{"id": "a", "generate": {"features": 50, "ctc_fraction": 0.1}},
//               {"id": "b", "sxfm": "path/to/model.xml"}],
//    "m": [1, 2], "fractions": [0.3], "reorderings": 2, "repeats": 1,
//    "seed": 7, "reorder": "solution" | "requirements" | "none", "threads": 1,
//    "budget_ms": 1000, "evolutionary": {"generations": 500, ...}}
// Relative sxfm paths resolve against `base_dir`.
SuiteConfig parse_suite_config(std::string_view document, const std::string& base_dir = ".");

struct EvolutionaryRow {
  std::string model_id;
  std::size_t num_vars = 0;
  double fraction = 0.0;
  int reorder_index = 1;
  std::size_t delta_size = 0;
  std::size_t delta_min_size = 0;
  std::uint64_t checks = 0;
  double elapsed_ms = 0.0;
  std::optional<double> minimality;  // unset for partial results
  std::optional<double> accuracy;
  std::string status;
  std::uint64_t seed = 0;
};

struct SuiteResult {
  std::vector<ScenarioResult> rows;
  std::vector<SummaryRow> summary;  // grouped by (|V|, m)
  std::vector<EvolutionaryRow> evolutionary;
};

// Cartesian run over models × fractions × reorderings × m × repeats, in that
// nesting order. Failures land in the row's error column.
SuiteResult run_suite(const SuiteConfig& config);

// Results section, a blank line, the aggregate section and, when present, a
// blank line and the evolutionary section.
std::string suite_to_csv(const SuiteResult& result);

// Deterministic seed derivation shared by the harness and its tests.
std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> path);

}  // namespace flexdiag
