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
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "flexdiag/consistency.hpp"
#include "flexdiag/flexdiag.hpp"
#include "flexdiag/task.hpp"

namespace flexdiag {

struct ValidationReport {
  bool kb_consistent = false;            // C
  bool requirements_consistent = false;  // C ∪ R
  bool solution_complete = false;        // one assignment per variable
  bool reconfiguration_needed = false;   // C ∪ R ∪ S inconsistent
  std::vector<std::string> messages;

  // (a), (b) and (c) hold, so a diagnosis can be computed.
  bool ready() const noexcept { return kb_consistent && requirements_consistent && solution_complete; }
};

ValidationReport validate_task(const ReconfigurationTask& task, CheckSession& session);

struct ValueChange {
  std::string variable;
  Value old_value;
  Value new_value;
};

struct Reconfiguration {
  Diagnosis delta;
  std::vector<ValueChange> changed;             // Δ members whose value differs
  std::vector<std::string> unchanged_in_delta;  // Δ members that kept their value
  Solution repaired;                            // S'
  std::chrono::nanoseconds elapsed{0};          // diagnosis plus repair
};

// Diagnoses the task with the given granularity and re-solves
// C ∪ R ∪ (S − Δ) for the repaired configuration. When no repair is needed
// the result carries status not_needed and S itself. Throws
// NoDiagnosisExists and BudgetExceeded.
Reconfiguration reconfigure(const ReconfigurationTask& task, Granularity m, CheckSession& session);

inline constexpr std::size_t kUnlimited = std::numeric_limits<std::size_t>::max();

// Breadth-first hitting-set DAG over diagnoses. Each node moves its path
// label from the candidates into the background and asks FlexDiag for a
// diagnosis of what is left. Returns at most `max_count` diagnoses, with
// strict supersets of other results removed. If the configuration already
// satisfies the requirements, the single not_needed diagnosis is returned.
std::vector<Diagnosis> enumerate_diagnoses(const ReconfigurationTask& task, Granularity m, std::size_t max_count,
                                           CheckSession& session);

// {delta, changed, unchanged_in_delta, repaired, checks, elapsed_ms}
std::string reconfiguration_to_json(const Reconfiguration& r, const ReconfigurationTask& task);
std::string validation_to_json(const ValidationReport& report);
std::string diagnoses_to_json(const std::vector<Diagnosis>& diagnoses, const ReconfigurationTask& task);

}  // namespace flexdiag
