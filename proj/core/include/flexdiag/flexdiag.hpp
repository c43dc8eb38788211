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
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "flexdiag/consistency.hpp"
#include "flexdiag/task.hpp"

namespace flexdiag {

// Block size below which the recursion stops splitting and returns the
// whole block. m = 1 yields minimal diagnoses.
class Granularity {
 public:
  explicit Granularity(int m);
  int value() const noexcept { return m_; }

 private:
  int m_;
};

enum class DiagnosisStatus {
  found,
  none_exists,  // C ∪ R is inconsistent; no subset of S can help
  not_needed,   // C ∪ R ∪ S is already consistent
  partial,      // a candidate that does not restore consistency (evolutionary baseline)
};

std::string_view to_string(DiagnosisStatus status);

struct Diagnosis {
  DiagnosisStatus status = DiagnosisStatus::none_exists;
  ConstraintList elements;  // subset of S, in diagnosis-ordering order
  int m = 1;
  std::uint64_t checks = 0;        // checks made inside the recursion
  std::uint64_t guard_checks = 0;  // top-level pre-checks
  std::chrono::nanoseconds elapsed{0};

  std::uint64_t total_checks() const noexcept { return checks + guard_checks; }
};

struct FlexDiagOptions {
  // Check C ∪ R ∪ S first and report not_needed when it is consistent.
  bool precheck = false;
};

// One diagnosis of `solution` (ordered lowest importance first) with respect
// to kb ∪ requirements. Throws BudgetExceeded when the session runs out.
Diagnosis diagnose(const ConstraintStore& store, std::span<const ConstraintIndex> solution,
                   std::span<const ConstraintIndex> kb, std::span<const ConstraintIndex> requirements, Granularity m,
                   CheckSession& session, const FlexDiagOptions& options = {});

// Uses the task's ordering.
Diagnosis diagnose(const ReconfigurationTask& task, Granularity m, CheckSession& session,
                   const FlexDiagOptions& options = {});

// The recursive core. `all` must be sorted; the result is unordered.
ConstraintList flexd(const ConstraintStore& store, const ConstraintList& removed, std::span<const ConstraintIndex> candidates,
                     const ConstraintList& all, int m, CheckSession& session);

// Worst-case number of consistency checks for |S| = n and diagnosis size
// delta:
//   m = 1:  2·delta·log2(n/delta) + 2·delta
//   m > 1:  2·delta·log2(2n/(delta·m))
// Throws OutOfRange for invalid arguments and when delta·m > n with m > 1.
std::uint64_t estimate_checks(std::uint64_t n, std::uint64_t delta, std::uint64_t m);

// Every subset-minimal diagnosis of `solution`, by exhaustive enumeration in
// ascending cardinality. Results are sorted by size, then by ordering
// position. Throws InstanceTooLarge above 20 candidates.
std::vector<ConstraintList> brute_force_min_diagnoses(const ConstraintStore& store,
                                                      std::span<const ConstraintIndex> solution,
                                                      std::span<const ConstraintIndex> kb,
                                                      std::span<const ConstraintIndex> requirements);

std::vector<ConstraintList> brute_force_min_diagnoses(const ReconfigurationTask& task);

// {status, delta, m, checks, guard_checks, elapsed_ms, bound}
std::string diagnosis_to_json(const Diagnosis& diagnosis, const ConstraintStore& store, std::size_t solution_size);

// Sorted union helper shared by the diagnosis modules.
ConstraintList sorted_union(std::span<const ConstraintIndex> a, std::span<const ConstraintIndex> b);
ConstraintList sorted_difference(std::span<const ConstraintIndex> all, std::span<const ConstraintIndex> removed);

}  // namespace flexdiag
