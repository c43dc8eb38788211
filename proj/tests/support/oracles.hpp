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

// Reference implementations used only by tests. They share nothing with the
// library beyond the parsed data structures.

#include <cstdint>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include "flexdiag/feature_model.hpp"
#include "flexdiag/task.hpp"

namespace oracle {

using flexdiag::ConstraintIndex;
using flexdiag::ConstraintList;
using flexdiag::Value;

// Two-valued evaluation on a total assignment, straight recursion over the
// tree.
bool holds(const flexdiag::Expr& expr, const std::vector<Value>& assignment);

// Calls `visit` for every total assignment of the store's variables.
// Stops early when `visit` returns false.
void for_each_assignment(const flexdiag::VariableTable& vars,
                         const std::function<bool(const std::vector<Value>&)>& visit);

std::vector<std::vector<Value>> all_solutions(const flexdiag::ConstraintStore& store, const ConstraintList& constraints);

bool consistent(const flexdiag::ConstraintStore& store, const ConstraintList& constraints);

// Minimal diagnoses as minimal sets of S positions where some solution of
// C ∪ R differs from S. Returned as sorted constraint-index sets.
std::set<ConstraintList> min_diagnoses(const flexdiag::ReconfigurationTask& task);

// True iff removing `delta` from S restores consistency.
bool is_correction(const flexdiag::ReconfigurationTask& task, const ConstraintList& delta);

// Check bound evaluated in long double; nullopt-like -1 for undefined cells.
long long estimate(long long n, long long delta, long long m);

// Feature-model semantics: the selection (indexed like fm.features) is valid.
bool valid_selection(const flexdiag::FeatureModel& fm, const std::vector<bool>& selected);

std::string data_path(const std::string& relative);

}  // namespace oracle
