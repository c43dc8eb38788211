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
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "flexdiag/task.hpp"

namespace flexdiag {

// Accounting and memoization for the consistency checks of one diagnosis
// run. Single-owner; give each concurrent worker its own session.
//
// Every call to is_consistent() counts as one check, including calls that
// are answered from the cache. The optional budget is a wall-clock deadline
// measured from construction (or the last restart()).
class CheckSession {
 public:
  using Clock = std::chrono::steady_clock;

  CheckSession() : start_(Clock::now()) {}
  explicit CheckSession(std::optional<std::chrono::milliseconds> budget, bool use_cache = true);

  std::uint64_t checks() const noexcept { return checks_; }
  std::uint64_t cache_hits() const noexcept { return cache_hits_; }
  std::uint64_t nodes() const noexcept { return nodes_; }
  bool caching() const noexcept { return use_cache_; }

  // Resets the deadline clock; counters are kept.
  void restart();
  Clock::duration elapsed() const { return Clock::now() - start_; }

  // Throws BudgetExceeded once the deadline has passed. Called by the solver
  // between node expansions.
  void tick();

 private:
  friend bool is_consistent(const ConstraintStore&, std::span<const ConstraintIndex>, CheckSession&);

  std::optional<std::chrono::milliseconds> budget_;
  bool use_cache_ = true;
  Clock::time_point start_;
  std::uint64_t checks_ = 0;
  std::uint64_t cache_hits_ = 0;
  std::uint64_t nodes_ = 0;
  const ConstraintStore* cached_store_ = nullptr;
  std::map<ConstraintList, bool> cache_;
};

// Total assignment, indexed by VarIndex.
struct Solution {
  std::vector<Value> values;

  bool operator==(const Solution&) const = default;
};

struct SolveOptions {
  // When set, each variable's values are tried in a seeded random order
  // instead of ascending order.
  std::optional<std::uint64_t> value_seed;
};

// True iff some total assignment satisfies every listed constraint.
// Increments the session's check counter by exactly one.
bool is_consistent(const ConstraintStore& store, std::span<const ConstraintIndex> constraints, CheckSession& session);

// Backtracking search with forward checking; variables in declaration
// order. Does not count as a consistency check.
std::optional<Solution> solve(const ConstraintStore& store, std::span<const ConstraintIndex> constraints,
                              CheckSession& session, const SolveOptions& options = {});

// True iff `solution` satisfies every listed constraint.
bool satisfies(const ConstraintStore& store, std::span<const ConstraintIndex> constraints, const Solution& solution);

}  // namespace flexdiag
