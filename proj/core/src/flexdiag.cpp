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

#include "flexdiag/flexdiag.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "flexdiag/error.hpp"
#include "json.hpp"

namespace flexdiag {

Granularity::Granularity(int m) : m_(m) {
  if (m < 1) throw OutOfRange("granularity m must be >= 1, got " + std::to_string(m));
}

std::string_view to_string(DiagnosisStatus status) {
  switch (status) {
    case DiagnosisStatus::found: return "found";
    case DiagnosisStatus::none_exists: return "none-exists";
    case DiagnosisStatus::not_needed: return "not-needed";
    case DiagnosisStatus::partial: return "partial";
  }
  return "unknown";
}

ConstraintList sorted_union(std::span<const ConstraintIndex> a, std::span<const ConstraintIndex> b) {
  ConstraintList out(a.begin(), a.end());
  out.insert(out.end(), b.begin(), b.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

ConstraintList sorted_difference(std::span<const ConstraintIndex> all, std::span<const ConstraintIndex> removed) {
  ConstraintList r(removed.begin(), removed.end());
  std::sort(r.begin(), r.end());
  ConstraintList out;
  out.reserve(all.size());
  std::set_difference(all.begin(), all.end(), r.begin(), r.end(), std::back_inserter(out));
  return out;
}

ConstraintList flexd(const ConstraintStore& store, const ConstraintList& removed,
                     std::span<const ConstraintIndex> candidates, const ConstraintList& all, int m,
                     CheckSession& session) {
  if (!removed.empty() && is_consistent(store, all, session)) return {};
  const std::size_t q = candidates.size();
  if (q <= static_cast<std::size_t>(m)) return ConstraintList(candidates.begin(), candidates.end());

  const std::size_t k = (q + 1) / 2;
  const auto first = candidates.first(k);
  const auto second = candidates.subspan(k);
  const ConstraintList first_list(first.begin(), first.end());

  ConstraintList d1 = flexd(store, first_list, second, sorted_difference(all, first), m, session);
  ConstraintList d2 = flexd(store, d1, first, sorted_difference(all, d1), m, session);
  d1.insert(d1.end(), d2.begin(), d2.end());
  return d1;
}

Diagnosis diagnose(const ConstraintStore& store, std::span<const ConstraintIndex> solution,
                   std::span<const ConstraintIndex> kb, std::span<const ConstraintIndex> requirements, Granularity m,
                   CheckSession& session, const FlexDiagOptions& options) {
  const auto started = CheckSession::Clock::now();
  Diagnosis result;
  result.m = m.value();
  const auto finish = [&](DiagnosisStatus status) {
    result.status = status;
    result.elapsed = std::chrono::duration_cast<std::chrono::nanoseconds>(CheckSession::Clock::now() - started);
    return result;
  };

  const ConstraintList background = sorted_union(kb, requirements);
  const ConstraintList all = sorted_union(background, solution);

  if (options.precheck) {
    const bool ok = is_consistent(store, all, session);
    ++result.guard_checks;
    if (ok) return finish(DiagnosisStatus::not_needed);
  }
  if (solution.empty()) return finish(DiagnosisStatus::none_exists);
  const bool background_ok = is_consistent(store, background, session);
  ++result.guard_checks;
  if (!background_ok) return finish(DiagnosisStatus::none_exists);

  const auto before = session.checks();
  ConstraintList delta = flexd(store, {}, solution, all, m.value(), session);
  result.checks = session.checks() - before;

  std::unordered_map<ConstraintIndex, std::size_t> rank;
  for (std::size_t i = 0; i < solution.size(); ++i) rank.emplace(solution[i], i);
  std::sort(delta.begin(), delta.end(), [&](auto a, auto b) { return rank.at(a) < rank.at(b); });
  result.elements = std::move(delta);
  return finish(result.elements.empty() ? DiagnosisStatus::not_needed : DiagnosisStatus::found);
}

Diagnosis diagnose(const ReconfigurationTask& task, Granularity m, CheckSession& session,
                   const FlexDiagOptions& options) {
  return diagnose(task.store, task.ordering, task.kb, task.requirements, m, session, options);
}

std::uint64_t estimate_checks(std::uint64_t n, std::uint64_t delta, std::uint64_t m) {
  if (n < 1 || m < 1 || delta < 1 || delta > n)
    throw OutOfRange("estimate requires n >= 1, 1 <= delta <= n and m >= 1");
  const double nd = static_cast<double>(n);
  const double dd = static_cast<double>(delta);
  double bound = 0.0;
  if (m == 1) {
    bound = 2.0 * dd * std::log2(nd / dd) + 2.0 * dd;
  } else {
    if (delta * m > n) throw OutOfRange("granularity exceeds instance: delta * m > n");
    bound = 2.0 * dd * std::log2(2.0 * nd / (dd * static_cast<double>(m)));
  }
  const double rounded = std::round(bound);
  if (std::abs(bound - rounded) < 1e-9) return static_cast<std::uint64_t>(rounded);
  return static_cast<std::uint64_t>(std::ceil(bound));
}

std::vector<ConstraintList> brute_force_min_diagnoses(const ConstraintStore& store,
                                                      std::span<const ConstraintIndex> solution,
                                                      std::span<const ConstraintIndex> kb,
                                                      std::span<const ConstraintIndex> requirements) {
  const std::size_t n = solution.size();
  if (n > 20) throw InstanceTooLarge("brute-force diagnosis is limited to 20 candidates, got " + std::to_string(n));

  CheckSession session(std::nullopt, /*use_cache=*/false);
  const ConstraintList all = sorted_union(sorted_union(kb, requirements), solution);
  std::vector<std::uint32_t> found;  // bitmasks over positions in `solution`
  std::vector<ConstraintList> out;

  for (std::size_t size = 0; size <= n; ++size) {
    // Gosper's hack over all masks with `size` bits set, ascending.
    std::uint32_t mask = size == 0 ? 0u : (std::uint32_t{1} << size) - 1;
    const std::uint32_t limit = std::uint32_t{1} << n;
    while (mask < limit) {
      const bool superset = std::any_of(found.begin(), found.end(), [&](auto f) { return (mask & f) == f; });
      if (!superset) {
        ConstraintList removed;
        for (std::size_t i = 0; i < n; ++i)
          if (mask & (std::uint32_t{1} << i)) removed.push_back(solution[i]);
        if (is_consistent(store, sorted_difference(all, removed), session)) {
          found.push_back(mask);
          out.push_back(std::move(removed));
        }
      }
      if (size == 0) break;
      const std::uint32_t c = mask & -mask;
      const std::uint32_t r = mask + c;
      mask = (((r ^ mask) >> 2) / c) | r;
    }
    // The empty set is a diagnosis only when nothing needs repair.
    if (size == 0 && !found.empty()) break;
  }
  return out;
}

std::vector<ConstraintList> brute_force_min_diagnoses(const ReconfigurationTask& task) {
  return brute_force_min_diagnoses(task.store, task.ordering, task.kb, task.requirements);
}

std::string diagnosis_to_json(const Diagnosis& diagnosis, const ConstraintStore& store, std::size_t solution_size) {
  nlohmann::ordered_json doc;
  doc["status"] = std::string(to_string(diagnosis.status));
  doc["delta"] = store.ids(diagnosis.elements);
  doc["m"] = diagnosis.m;
  doc["checks"] = diagnosis.checks;
  doc["guard_checks"] = diagnosis.guard_checks;
  doc["elapsed_ms"] = std::chrono::duration<double, std::milli>(diagnosis.elapsed).count();
  doc["bound"] = nullptr;
  if (diagnosis.status == DiagnosisStatus::found && solution_size > 0) {
    try {
      doc["bound"] = estimate_checks(solution_size, diagnosis.elements.size(), static_cast<std::uint64_t>(diagnosis.m));
    } catch (const OutOfRange&) {
    }
  }
  return doc.dump(2) + "\n";
}

}  // namespace flexdiag
