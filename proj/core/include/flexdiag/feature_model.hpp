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
#include <string>
#include <string_view>
#include <vector>

#include "flexdiag/consistency.hpp"
#include "flexdiag/task.hpp"

namespace flexdiag {

enum class Relation { root, mandatory, optional, grouped };
enum class GroupKind { or_group, alternative };

struct Feature {
  std::string id;    // CSP variable name
  std::string name;  // display name
  int parent = -1;
  Relation relation = Relation::root;
  int group = -1;  // index into FeatureModel::groups when relation == grouped
  std::vector<int> children;
};

struct FeatureGroup {
  std::string id;
  int parent = -1;
  GroupKind kind = GroupKind::alternative;
  std::vector<int> members;
};

struct Literal {
  int feature = -1;
  bool positive = true;

  bool operator==(const Literal&) const = default;
};

using Clause = std::vector<Literal>;

// Feature tree plus cross-tree constraints in clause form. Feature 0 is the
// root.
struct FeatureModel {
  std::string name;
  std::vector<Feature> features;
  std::vector<FeatureGroup> groups;
  std::vector<Clause> ctcs;

  std::optional<int> find(std::string_view id) const;
  bool is_ancestor(int ancestor, int feature) const;
};

// SXFM (SPLOT) subset: `:r`, `:m`, `:o`, `:g [1,1]` / `:g [1,*]` and group
// members `: name (id)` in a tab/space indented tree; CNF constraints such
// as `C1: ~a or b`. Throws ValidationError.
FeatureModel parse_sxfm(std::string_view document);
std::string write_sxfm(const FeatureModel& fm);

// One boolean variable per feature, in the order of fm.features.
ConfigurationTask fm_to_csp(const FeatureModel& fm);

struct GenerationParams {
  int num_features = 20;
  double ctc_fraction = 0.1;
  int max_children = 4;
  double p_mandatory = 0.25;
  double p_optional = 0.35;
  double p_or = 0.2;
  double p_alternative = 0.2;
  std::uint64_t seed = 1;
  int max_ctc_retries = 200;

  void validate() const;  // throws ValidationError
};

// Seeded top-down growth. Every feature gets 1..max_children children until
// the requested size is reached; the relation of a sibling set is drawn from
// the branch probabilities. round(ctc_fraction * num_features) binary
// requires/excludes constraints link non-ancestor pairs; a constraint that
// would void the model is redrawn. Throws GenerationFailed.
FeatureModel generate_random_fm(const GenerationParams& params);

// A valid configuration found with a seeded value order. Values are indexed
// like the variables of fm_to_csp(fm). Throws UnsatisfiableModel.
std::vector<Value> sample_configuration(const FeatureModel& fm, std::uint64_t seed);

// Requirements for a reconfiguration: project a second, different
// configuration onto ceil(fraction * |V|) randomly chosen variables, as
// `v == value` constraints r1, r2, ... Throws NoAlternativeSolution.
std::vector<ExprSource> generate_reconfig_requirements(const FeatureModel& fm, const std::vector<Value>& current,
                                                       double fraction, std::uint64_t seed);

// Pairs a model with a configuration (solution ids s1..sn) and requirements.
ReconfigurationTask make_fm_reconfiguration_task(const FeatureModel& fm, const std::vector<Value>& current,
                                                 const std::vector<ExprSource>& requirements);

}  // namespace flexdiag
