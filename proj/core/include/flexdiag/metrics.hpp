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

#include <algorithm>
#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "flexdiag/error.hpp"

namespace flexdiag {

// |Δ_min| / |Δ|. May exceed 1 when a coarse run finds a smaller diagnosis
// than the m = 1 reference. Only set contents matter.
template <class Range>
double minimality(const Range& delta, const Range& delta_min) {
  const std::set<typename Range::value_type> d(delta.begin(), delta.end());
  const std::set<typename Range::value_type> dm(delta_min.begin(), delta_min.end());
  if (d.empty() || dm.empty()) throw OutOfRange("minimality needs two non-empty diagnoses");
  return static_cast<double>(dm.size()) / static_cast<double>(d.size());
}

// |Δ ∩ Δ_min| / |Δ_min|, in [0, 1].
template <class Range>
double accuracy(const Range& delta, const Range& delta_min) {
  const std::set<typename Range::value_type> d(delta.begin(), delta.end());
  const std::set<typename Range::value_type> dm(delta_min.begin(), delta_min.end());
  if (d.empty() || dm.empty()) throw OutOfRange("accuracy needs two non-empty diagnoses");
  const auto common = std::count_if(dm.begin(), dm.end(), [&](const auto& x) { return d.contains(x); });
  return static_cast<double>(common) / static_cast<double>(dm.size());
}

struct QualityRecord {
  double minimality = 1.0;
  double accuracy = 1.0;
  std::size_t delta_size = 0;
  std::size_t delta_min_size = 0;
};

template <class Range>
QualityRecord quality(const Range& delta, const Range& delta_min) {
  return {minimality(delta, delta_min), accuracy(delta, delta_min), std::set(delta.begin(), delta.end()).size(),
          std::set(delta_min.begin(), delta_min.end()).size()};
}

// One benchmark run.
struct ScenarioResult {
  std::string model_id;
  std::size_t num_vars = 0;
  std::size_t num_constraints = 0;
  int m = 1;
  double fraction = 0.0;
  int reorder_index = 0;
  int repeat_index = 1;
  std::size_t delta_size = 0;
  std::uint64_t checks = 0;
  double elapsed_ms = 0.0;
  double minimality = 0.0;
  double accuracy = 0.0;
  std::uint64_t seed = 0;
  std::string error;  // empty on success; such rows are left out of aggregates
};

enum class GroupKey { model_id, num_vars, m, fraction };

struct SummaryRow {
  std::string model_id;
  std::size_t num_vars = 0;
  int m = 0;
  double fraction = 0.0;
  double mean_delta_size = 0.0;
  double mean_checks = 0.0;
  double mean_time_ms = 0.0;
  double mean_minimality = 0.0;
  double mean_accuracy = 0.0;
  std::size_t n = 0;
};

// Arithmetic means per group over the rows without an error. Groups come out
// sorted by key. Throws OutOfRange on empty input.
std::vector<SummaryRow> aggregate(const std::vector<ScenarioResult>& records,
                                  const std::vector<GroupKey>& keys = {GroupKey::num_vars, GroupKey::m});

}  // namespace flexdiag
