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

#include <cstdint>
#include <optional>

#include "flexdiag/flexdiag.hpp"

namespace flexdiag {

struct EvolutionParams {
  int population_size = 50;
  int generations = 500;
  double crossover_rate = 0.8;
  std::optional<double> mutation_rate;  // unset: 1 / |S|
  int tournament_size = 3;
  double initial_bit_probability = 0.5;
  std::uint64_t seed = 1;

  void validate() const;  // throws ValidationError
};

// Genetic search over bit vectors on S (set bit: the assignment is in Δ).
// Fitness, minimized, is |Δ| when C ∪ R ∪ (S − Δ) is consistent and
// otherwise |S| plus the number of C ∪ R constraints still violated after
// one greedy repair of the Δ variables. The fittest genome of the last
// generation is returned with status found when it restores consistency and
// partial when it does not. Throws BudgetExceeded.
Diagnosis evolutionary_diagnose(const ReconfigurationTask& task, const EvolutionParams& params, CheckSession& session);

}  // namespace flexdiag
