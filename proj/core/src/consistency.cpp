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

#include "flexdiag/consistency.hpp"

#include <algorithm>
#include <numeric>
#include <random>

#include "flexdiag/error.hpp"

namespace flexdiag {

CheckSession::CheckSession(std::optional<std::chrono::milliseconds> budget, bool use_cache)
    : budget_(budget), use_cache_(use_cache), start_(Clock::now()) {}

void CheckSession::restart() { start_ = Clock::now(); }

void CheckSession::tick() {
  ++nodes_;
  if (budget_ && Clock::now() - start_ > *budget_) throw BudgetExceeded();
}

namespace {

// Chronological backtracking with forward checking. A constraint with a
// single unassigned variable left filters that variable's domain; a domain
// that shrinks to one value is assigned immediately and propagated in turn.
class Search {
 public:
  Search(const ConstraintStore& store, std::span<const ConstraintIndex> ids, CheckSession& session,
         const SolveOptions& options)
      : store_(store), session_(session), nvars_(store.variables().size()) {
    exprs_.reserve(ids.size());
    for (auto id : ids) exprs_.push_back(&store[id].expr);
    watches_.resize(nvars_);
    constrained_.assign(nvars_, false);
    for (std::uint32_t c = 0; c < exprs_.size(); ++c) {
      for (auto v : exprs_[c]->scope()) {
        watches_[v].push_back(c);
        constrained_[v] = true;
      }
    }
    alive_.resize(nvars_);
    alive_count_.resize(nvars_);
    order_.resize(nvars_);
    std::mt19937_64 rng(options.value_seed.value_or(0));
    for (VarIndex v = 0; v < nvars_; ++v) {
      const auto n = store.variables()[v].domain.size();
      alive_[v].assign(n, 1);
      alive_count_[v] = n;
      order_[v].resize(n);
      std::iota(order_[v].begin(), order_[v].end(), std::size_t{0});
      if (options.value_seed) std::shuffle(order_[v].begin(), order_[v].end(), rng);
    }
    assignment_.assign(nvars_, std::nullopt);
  }

  std::optional<Solution> run() {
    // Constraints without variables, and initial filtering of every constraint.
    for (std::uint32_t c = 0; c < exprs_.size(); ++c) {
      if (!revise(c)) return std::nullopt;
    }
    if (!propagate()) return std::nullopt;
    if (!branch(0)) return std::nullopt;
    Solution s;
    s.values.resize(nvars_);
    for (VarIndex v = 0; v < nvars_; ++v) s.values[v] = *assignment_[v];
    return s;
  }

 private:
  const std::vector<Value>& domain(VarIndex v) const { return store_.variables()[v].domain.values(); }

  void assign(VarIndex v, Value value) {
    assignment_[v] = value;
    assigned_trail_.push_back(v);
    queue_.push_back(v);
  }

  void remove(VarIndex v, std::size_t k) {
    alive_[v][k] = 0;
    --alive_count_[v];
    removed_trail_.emplace_back(v, k);
  }

  // Filters the constraint's last free variable, or checks it when none is
  // free. Returns false on a wipe-out or a violated constraint.
  bool revise(std::uint32_t c) {
    const Expr& e = *exprs_[c];
    std::optional<VarIndex> free;
    std::size_t free_count = 0;
    for (auto v : e.scope()) {
      if (!assignment_[v]) {
        free = v;
        if (++free_count > 1) break;
      }
    }
    if (free_count == 0) return evaluate(e, assignment_) == Truth::sat;
    if (free_count > 1) return evaluate(e, assignment_) != Truth::unsat;

    const VarIndex v = *free;
    const auto& values = domain(v);
    for (std::size_t k = 0; k < values.size(); ++k) {
      if (!alive_[v][k]) continue;
      assignment_[v] = values[k];
      const Truth t = evaluate(e, assignment_);
      assignment_[v] = std::nullopt;
      if (t == Truth::unsat) remove(v, k);
    }
    if (alive_count_[v] == 0) return false;
    if (alive_count_[v] == 1) {
      for (std::size_t k = 0; k < values.size(); ++k)
        if (alive_[v][k]) assign(v, values[k]);
    }
    return true;
  }

  bool propagate() {
    while (!queue_.empty()) {
      const VarIndex v = queue_.back();
      queue_.pop_back();
      for (auto c : watches_[v])
        if (!revise(c)) {
          queue_.clear();
          return false;
        }
    }
    return true;
  }

  void undo(std::size_t removed_mark, std::size_t assigned_mark) {
    while (removed_trail_.size() > removed_mark) {
      auto [v, k] = removed_trail_.back();
      removed_trail_.pop_back();
      alive_[v][k] = 1;
      ++alive_count_[v];
    }
    while (assigned_trail_.size() > assigned_mark) {
      assignment_[assigned_trail_.back()] = std::nullopt;
      assigned_trail_.pop_back();
    }
  }

  bool branch(VarIndex from) {
    VarIndex v = from;
    while (v < nvars_ && assignment_[v]) ++v;
    if (v == nvars_) return true;
    session_.tick();

    const auto& values = domain(v);
    if (!constrained_[v]) {
      // Nothing to check; take the first value in the configured order.
      for (auto k : order_[v])
        if (alive_[v][k]) {
          assignment_[v] = values[k];
          assigned_trail_.push_back(v);
          break;
        }
      return branch(v + 1);
    }

    for (auto k : order_[v]) {
      if (!alive_[v][k]) continue;
      const auto removed_mark = removed_trail_.size();
      const auto assigned_mark = assigned_trail_.size();
      assign(v, values[k]);
      if (propagate() && branch(v + 1)) return true;
      undo(removed_mark, assigned_mark);
    }
    return false;
  }

  const ConstraintStore& store_;
  CheckSession& session_;
  std::size_t nvars_;
  std::vector<const Expr*> exprs_;
  std::vector<std::vector<std::uint32_t>> watches_;
  std::vector<bool> constrained_;
  std::vector<std::vector<char>> alive_;
  std::vector<std::size_t> alive_count_;
  std::vector<std::vector<std::size_t>> order_;
  std::vector<std::optional<Value>> assignment_;
  std::vector<VarIndex> assigned_trail_;
  std::vector<std::pair<VarIndex, std::size_t>> removed_trail_;
  std::vector<VarIndex> queue_;
};

}  // namespace

bool is_consistent(const ConstraintStore& store, std::span<const ConstraintIndex> constraints, CheckSession& session) {
  ConstraintList key;
  if (session.use_cache_) {
    if (session.cached_store_ != &store) {
      session.cache_.clear();
      session.cached_store_ = &store;
    }
    key.assign(constraints.begin(), constraints.end());
    std::sort(key.begin(), key.end());
    key.erase(std::unique(key.begin(), key.end()), key.end());
    if (auto it = session.cache_.find(key); it != session.cache_.end()) {
      ++session.checks_;
      ++session.cache_hits_;
      return it->second;
    }
  }
  const bool result = Search(store, constraints, session, {}).run().has_value();
  ++session.checks_;
  if (session.use_cache_) session.cache_.emplace(std::move(key), result);
  return result;
}

std::optional<Solution> solve(const ConstraintStore& store, std::span<const ConstraintIndex> constraints,
                              CheckSession& session, const SolveOptions& options) {
  return Search(store, constraints, session, options).run();
}

bool satisfies(const ConstraintStore& store, std::span<const ConstraintIndex> constraints, const Solution& solution) {
  std::vector<std::optional<Value>> asg(solution.values.begin(), solution.values.end());
  if (asg.size() != store.variables().size()) return false;
  for (VarIndex v = 0; v < asg.size(); ++v)
    if (!store.variables()[v].domain.contains(*asg[v])) return false;
  return std::all_of(constraints.begin(), constraints.end(),
                     [&](ConstraintIndex c) { return evaluate(store[c].expr, asg) == Truth::sat; });
}

}  // namespace flexdiag
