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

// Micro benchmarks on generated feature-model reconfiguration tasks. Besides
// wall time each benchmark reports the mean number of consistency checks.

#include <benchmark/benchmark.h>

#include <map>

#include "flexdiag/bench.hpp"
#include "flexdiag/evolutionary.hpp"
#include "flexdiag/feature_model.hpp"
#include "flexdiag/flexdiag.hpp"
#include "flexdiag/reconfigure.hpp"

using namespace flexdiag;

namespace {

const ReconfigurationTask& fm_task(int features) {
  static std::map<int, ReconfigurationTask> cache;
  auto it = cache.find(features);
  if (it != cache.end()) return it->second;
  GenerationParams p;
  p.num_features = features;
  p.ctc_fraction = 0.1;
  p.seed = 42;
  const FeatureModel fm = generate_random_fm(p);
  const auto current = sample_configuration(fm, 1);
  const auto reqs = generate_reconfig_requirements(fm, current, 0.5, 2);
  return cache.emplace(features, make_fm_reconfiguration_task(fm, current, reqs)).first->second;
}

void BM_Diagnose(benchmark::State& state) {
  const auto& task = fm_task(static_cast<int>(state.range(0)));
  const Granularity m(static_cast<int>(state.range(1)));
  std::uint64_t checks = 0;
  for (auto _ : state) {
    CheckSession session;
    const Diagnosis d = diagnose(task, m, session);
    benchmark::DoNotOptimize(d.elements.data());
    checks += d.total_checks();
  }
  state.counters["checks"] = benchmark::Counter(static_cast<double>(checks), benchmark::Counter::kAvgIterations);
}
BENCHMARK(BM_Diagnose)->ArgsProduct({{50, 100, 200}, {1, 2, 4, 6, 10}})->Unit(benchmark::kMicrosecond);

void BM_IsConsistent(benchmark::State& state) {
  const auto& task = fm_task(static_cast<int>(state.range(0)));
  ConstraintList all = task.kb;
  all.insert(all.end(), task.requirements.begin(), task.requirements.end());
  for (auto _ : state) {
    CheckSession session(std::nullopt, false);
    benchmark::DoNotOptimize(is_consistent(task.store, all, session));
  }
}
BENCHMARK(BM_IsConsistent)->Arg(50)->Arg(100)->Arg(200)->Unit(benchmark::kMicrosecond);

void BM_Evolutionary(benchmark::State& state) {
  const auto& task = fm_task(30);
  EvolutionParams p;
  p.generations = static_cast<int>(state.range(0));
  std::uint64_t checks = 0;
  for (auto _ : state) {
    CheckSession session;
    const Diagnosis d = evolutionary_diagnose(task, p, session);
    benchmark::DoNotOptimize(d.elements.data());
    checks += d.total_checks();
  }
  state.counters["checks"] = benchmark::Counter(static_cast<double>(checks), benchmark::Counter::kAvgIterations);
}
BENCHMARK(BM_Evolutionary)->Arg(50)->Arg(500)->Unit(benchmark::kMillisecond);

void BM_Enumerate(benchmark::State& state) {
  const auto& task = fm_task(50);
  for (auto _ : state) {
    CheckSession session;
    benchmark::DoNotOptimize(enumerate_diagnoses(task, Granularity(1), static_cast<std::size_t>(state.range(0)), session));
  }
}
BENCHMARK(BM_Enumerate)->Arg(1)->Arg(5)->Arg(20)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
