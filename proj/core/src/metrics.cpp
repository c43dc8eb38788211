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

#include "flexdiag/metrics.hpp"

#include <map>
#include <tuple>

namespace flexdiag {

std::vector<SummaryRow> aggregate(const std::vector<ScenarioResult>& records, const std::vector<GroupKey>& keys) {
  if (records.empty()) throw OutOfRange("cannot aggregate an empty result set");
  auto uses = [&](GroupKey k) { return std::find(keys.begin(), keys.end(), k) != keys.end(); };

  using Key = std::tuple<std::size_t, int, std::string, double>;
  std::map<Key, SummaryRow> groups;
  for (const auto& r : records) {
    if (!r.error.empty()) continue;
    const Key key{uses(GroupKey::num_vars) ? r.num_vars : 0, uses(GroupKey::m) ? r.m : 0,
                  uses(GroupKey::model_id) ? r.model_id : std::string(), uses(GroupKey::fraction) ? r.fraction : 0.0};
    auto& row = groups[key];
    row.num_vars = std::get<0>(key);
    row.m = std::get<1>(key);
    row.model_id = std::get<2>(key);
    row.fraction = std::get<3>(key);
    row.mean_delta_size += static_cast<double>(r.delta_size);
    row.mean_checks += static_cast<double>(r.checks);
    row.mean_time_ms += r.elapsed_ms;
    row.mean_minimality += r.minimality;
    row.mean_accuracy += r.accuracy;
    ++row.n;
  }

  std::vector<SummaryRow> out;
  out.reserve(groups.size());
  for (auto& [key, row] : groups) {
    const double n = static_cast<double>(row.n);
    row.mean_delta_size /= n;
    row.mean_checks /= n;
    row.mean_time_ms /= n;
    row.mean_minimality /= n;
    row.mean_accuracy /= n;
    out.push_back(row);
  }
  return out;
}

}  // namespace flexdiag
