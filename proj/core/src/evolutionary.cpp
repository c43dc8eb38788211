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

#include "flexdiag/evolutionary.hpp"

#include <algorithm>
#include <map>
#include <random>

#include "flexdiag/error.hpp"

namespace flexdiag {

void EvolutionParams::validate() const {
  if (population_size < 1) throw ValidationError("population_size must be at least 1");
  if (generations < 1) throw ValidationError("generations must be at least 1");
  if (tournament_size < 1) throw ValidationError("tournament_size must be at least 1");
  auto rate = [](double r, const char* name) {
    if (!(r >= 0.0 && r <= 1.0)) throw ValidationError(std::string(name) + " must lie in [0, 1]");
  };
  rate(crossover_rate, "crossover_rate");
  if (mutation_rate) rate(*mutation_rate, "mutation_rate");
  rate(initial_bit_probability, "initial_bit_probability");
}

namespace {

using Genome = std::vector<bool>;

struct Scored {
  Genome genome;
  std::size_t fitness = 0;
  bool consistent = false;
};

class Evaluator {
 public:
  Evaluator(const ReconfigurationTask& task, CheckSession& session)
      : task_(task), session_(session), background_(sorted_union(task.kb, task.requirements)) {}

  Scored score(Genome genome) {
    if (auto it = memo_.find(genome); it != memo_.end()) return it->second;
    session_.tick();
    ConstraintList constraints = background_;
    std::size_t delta = 0;
    for (std::size_t i = 0; i < genome.size(); ++i) {
      if (genome[i]) ++delta;
      else constraints.push_back(task_.ordering[i]);
    }
    std::sort(constraints.begin(), constraints.end());
    Scored s{genome, delta, is_consistent(task_.store, constraints, session_)};
    if (!s.consistent) s.fitness = genome.size() + violations_after_repair(genome);
    memo_.emplace(std::move(genome), s);
    return s;
  }

 private:
  std::size_t violated(const std::vector<std::optional<Value>>& values) const {
    std::size_t n = 0;
    for (auto c : background_)
      if (evaluate(task_.store[c].expr, values) != Truth::sat) ++n;
    return n;
  }

  // Each freed variable, in ordering order, takes the value that leaves the
  // fewest violated constraints given the values chosen so far.
  std::size_t violations_after_repair(const Genome& genome) const {
    const auto& vars = task_.store.variables();
    const std::vector<Value> current = task_.current_values();
    std::vector<std::optional<Value>> values(current.begin(), current.end());
    for (std::size_t i = 0; i < genome.size(); ++i) {
      if (!genome[i]) continue;
      const VarIndex v = vars.index_of(task_.assignment(task_.ordering[i]).variable);
      Value best = *values[v];
      std::size_t best_count = violated(values);
      for (Value candidate : vars[v].domain.values()) {
        values[v] = candidate;
        const std::size_t count = violated(values);
        if (count < best_count) {
          best_count = count;
          best = candidate;
        }
      }
      values[v] = best;
    }
    return violated(values);
  }

  const ReconfigurationTask& task_;
  CheckSession& session_;
  ConstraintList background_;
  std::map<Genome, Scored> memo_;
};

}  // namespace

Diagnosis evolutionary_diagnose(const ReconfigurationTask& task, const EvolutionParams& params, CheckSession& session) {
  params.validate();
  const auto started = CheckSession::Clock::now();
  const std::uint64_t checks_before = session.checks();
  Diagnosis out;
  out.m = 1;
  auto finish = [&]() {
    out.checks = session.checks() - checks_before;
    out.elapsed = std::chrono::duration_cast<std::chrono::nanoseconds>(CheckSession::Clock::now() - started);
    return out;
  };

  const ConstraintList all = sorted_union(sorted_union(task.kb, task.requirements), task.solution);
  if (is_consistent(task.store, all, session)) {
    out.status = DiagnosisStatus::not_needed;
    return finish();
  }

  const std::size_t n = task.ordering.size();
  const double mutation = params.mutation_rate.value_or(n == 0 ? 0.0 : 1.0 / static_cast<double>(n));
  std::mt19937_64 rng(params.seed);
  std::bernoulli_distribution initial_bit(params.initial_bit_probability);
  std::bernoulli_distribution crossover(params.crossover_rate);
  std::bernoulli_distribution flip(mutation);
  std::uniform_int_distribution<std::size_t> member(0, static_cast<std::size_t>(params.population_size) - 1);
  std::uniform_int_distribution<std::size_t> cut(1, n > 1 ? n - 1 : 1);

  Evaluator evaluator(task, session);
  auto better = [](const Scored& a, const Scored& b) { return a.fitness < b.fitness; };

  std::vector<Scored> population;
  for (int i = 0; i < params.population_size; ++i) {
    Genome g(n);
    for (std::size_t b = 0; b < n; ++b) g[b] = initial_bit(rng);
    population.push_back(evaluator.score(std::move(g)));
  }
  auto tournament = [&]() -> const Scored& {
    const Scored* best = &population[member(rng)];
    for (int i = 1; i < params.tournament_size; ++i) {
      const Scored& other = population[member(rng)];
      if (better(other, *best)) best = &other;
    }
    return *best;
  };

  for (int generation = 1; generation < params.generations; ++generation) {
    std::vector<Scored> next;
    next.push_back(*std::min_element(population.begin(), population.end(), better));
    while (next.size() < population.size()) {
      Genome a = tournament().genome;
      Genome b = tournament().genome;
      if (n > 1 && crossover(rng)) {
        const std::size_t point = cut(rng);
        for (std::size_t i = point; i < n; ++i) std::swap(a[i], b[i]);
      }
      for (Genome* g : {&a, &b}) {
        for (std::size_t i = 0; i < n; ++i)
          if (flip(rng)) (*g)[i] = !(*g)[i];
      }
      next.push_back(evaluator.score(std::move(a)));
      if (next.size() < population.size()) next.push_back(evaluator.score(std::move(b)));
    }
    population = std::move(next);
  }

  const Scored& best = *std::min_element(population.begin(), population.end(), better);
  for (std::size_t i = 0; i < n; ++i)
    if (best.genome[i]) out.elements.push_back(task.ordering[i]);
  out.status = best.consistent ? DiagnosisStatus::found : DiagnosisStatus::partial;
  return finish();
}

}  // namespace flexdiag
