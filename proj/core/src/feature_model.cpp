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

#include "flexdiag/feature_model.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "flexdiag/error.hpp"

namespace flexdiag {

std::optional<int> FeatureModel::find(std::string_view id) const {
  for (std::size_t i = 0; i < features.size(); ++i)
    if (features[i].id == id) return static_cast<int>(i);
  return std::nullopt;
}

bool FeatureModel::is_ancestor(int ancestor, int feature) const {
  for (int f = features[feature].parent; f >= 0; f = features[f].parent)
    if (f == ancestor) return true;
  return false;
}

// ---------------------------------------------------------------------------
// SXFM

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string sanitize_id(std::string_view name) {
  std::string id;
  for (char c : name) id += (std::isalnum(static_cast<unsigned char>(c)) || c == '_') ? c : '_';
  if (id.empty() || std::isdigit(static_cast<unsigned char>(id.front()))) id.insert(id.begin(), '_');
  return id;
}

// "Name (id)" -> {name, id}; id falls back to a sanitized name.
std::pair<std::string, std::string> split_name_id(std::string_view text) {
  text = trim(text);
  if (!text.empty() && text.back() == ')') {
    const auto open = text.rfind('(');
    if (open != std::string_view::npos) {
      const auto id = trim(text.substr(open + 1, text.size() - open - 2));
      const auto name = trim(text.substr(0, open));
      return {std::string(name.empty() ? id : name), std::string(id)};
    }
  }
  return {std::string(text), sanitize_id(text)};
}

[[noreturn]] void malformed(std::size_t line, const std::string& what) {
  throw ValidationError("sxfm line " + std::to_string(line) + ": " + what);
}

struct TreeLine {
  std::size_t indent;
  int feature = -1;  // feature index, or -1 for a group
  int group = -1;
};

std::size_t indent_width(std::string_view line) {
  std::size_t w = 0;
  for (char c : line) {
    if (c == '\t') w += 4;
    else if (c == ' ') w += 1;
    else break;
  }
  return w;
}

Clause parse_clause(const FeatureModel& fm, std::string_view text, std::size_t line_no) {
  Clause clause;
  std::string s(text);
  std::size_t pos = 0;
  while (pos <= s.size()) {
    auto next = s.find(" or ", pos);
    auto lit = trim(std::string_view(s).substr(pos, next == std::string::npos ? std::string::npos : next - pos));
    if (lit.empty()) malformed(line_no, "empty literal in constraint");
    bool positive = true;
    if (lit.front() == '~') {
      positive = false;
      lit = trim(lit.substr(1));
    }
    const auto f = fm.find(lit);
    if (!f) malformed(line_no, "constraint names unknown feature '" + std::string(lit) + "'");
    clause.push_back({*f, positive});
    if (next == std::string::npos) break;
    pos = next + 4;
  }
  return clause;
}

}  // namespace

FeatureModel parse_sxfm(std::string_view document) {
  FeatureModel fm;
  enum class Section { none, tree, constraints } section = Section::none;
  std::vector<TreeLine> stack;
  std::vector<std::pair<std::size_t, std::string>> constraint_lines;

  std::istringstream in{std::string(document)};
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string_view line = raw;
    const auto text = trim(line);
    if (text.empty()) continue;

    if (text.starts_with("<feature_model")) {
      const auto q = text.find("name=\"");
      if (q != std::string_view::npos) {
        const auto end = text.find('"', q + 6);
        fm.name = std::string(text.substr(q + 6, end - q - 6));
      }
      continue;
    }
    if (text == "<feature_tree>") { section = Section::tree; continue; }
    if (text == "</feature_tree>") { section = Section::none; continue; }
    if (text == "<constraints>") { section = Section::constraints; continue; }
    if (text == "</constraints>") { section = Section::none; continue; }
    if (section == Section::constraints) {
      constraint_lines.emplace_back(line_no, std::string(text));
      continue;
    }
    if (section != Section::tree) continue;  // meta data and other markup

    if (text.front() != ':') malformed(line_no, "feature lines must start with ':'");
    const std::size_t indent = indent_width(line);

    if (text.starts_with(":r")) {
      if (!fm.features.empty()) malformed(line_no, "more than one root feature");
      auto [name, id] = split_name_id(text.substr(2));
      fm.features.push_back(Feature{id, name, -1, Relation::root, -1, {}});
      stack.push_back({indent, 0, -1});
      continue;
    }
    if (fm.features.empty()) malformed(line_no, "the first feature must be the root (:r)");
    while (!stack.empty() && stack.back().indent >= indent) stack.pop_back();
    if (stack.empty()) malformed(line_no, "feature is not indented below the root");
    const TreeLine parent = stack.back();

    if (text.starts_with(":g")) {
      if (parent.feature < 0) malformed(line_no, "a group must be the child of a feature");
      auto rest = trim(text.substr(2));
      const auto lb = rest.rfind('[');
      if (lb == std::string_view::npos) malformed(line_no, "group without cardinality");
      std::string card;
      for (char c : rest.substr(lb)) if (c != ' ') card += c;
      GroupKind kind;
      if (card == "[1,1]" || card == "[1..1]") kind = GroupKind::alternative;
      else if (card == "[1,*]" || card == "[1..*]") kind = GroupKind::or_group;
      else malformed(line_no, "unsupported group cardinality " + card + " (only [1,1] and [1,*])");
      auto [name, id] = split_name_id(rest.substr(0, lb));
      fm.groups.push_back(FeatureGroup{id, parent.feature, kind, {}});
      stack.push_back({indent, -1, static_cast<int>(fm.groups.size()) - 1});
      continue;
    }

    Relation rel;
    std::string_view body;
    if (text.starts_with(":m")) { rel = Relation::mandatory; body = text.substr(2); }
    else if (text.starts_with(":o")) { rel = Relation::optional; body = text.substr(2); }
    else if (text.starts_with(": ") || text == ":") { rel = Relation::grouped; body = text.substr(1); }
    else malformed(line_no, "unknown feature marker");

    if (rel == Relation::grouped && parent.group < 0) malformed(line_no, "group member outside of a group");
    if (rel != Relation::grouped && parent.feature < 0) malformed(line_no, "solitary feature directly inside a group");

    auto [name, id] = split_name_id(body);
    if (!is_identifier(id)) malformed(line_no, "feature id '" + id + "' is not an identifier");
    if (fm.find(id)) malformed(line_no, "duplicate feature id '" + id + "'");
    const int index = static_cast<int>(fm.features.size());
    const int parent_feature = rel == Relation::grouped ? fm.groups[parent.group].parent : parent.feature;
    fm.features.push_back(Feature{id, name, parent_feature, rel, rel == Relation::grouped ? parent.group : -1, {}});
    fm.features[parent_feature].children.push_back(index);
    if (rel == Relation::grouped) fm.groups[parent.group].members.push_back(index);
    stack.push_back({indent, index, -1});
  }

  if (fm.features.empty()) throw ValidationError("sxfm document has no feature tree");
  for (const auto& g : fm.groups)
    if (g.members.empty()) throw ValidationError("group '" + g.id + "' has no members");

  for (const auto& [no, text] : constraint_lines) {
    const auto colon = text.find(':');
    if (colon == std::string::npos) malformed(no, "constraint without a name");
    fm.ctcs.push_back(parse_clause(fm, std::string_view(text).substr(colon + 1), no));
  }
  return fm;
}

std::string write_sxfm(const FeatureModel& fm) {
  std::ostringstream out;
  out << "<feature_model name=\"" << (fm.name.empty() ? "model" : fm.name) << "\">\n";
  out << "<feature_tree>\n";
  auto write = [&](auto&& self, int f, int depth) -> void {
    const Feature& feat = fm.features[f];
    out << std::string(static_cast<std::size_t>(depth), '\t');
    switch (feat.relation) {
      case Relation::root: out << ":r "; break;
      case Relation::mandatory: out << ":m "; break;
      case Relation::optional: out << ":o "; break;
      case Relation::grouped: out << ": "; break;
    }
    out << feat.name << " (" << feat.id << ")\n";
    std::vector<int> written_groups;
    for (int c : feat.children) {
      const Feature& child = fm.features[c];
      if (child.relation != Relation::grouped) {
        self(self, c, depth + 1);
        continue;
      }
      if (std::find(written_groups.begin(), written_groups.end(), child.group) != written_groups.end()) continue;
      written_groups.push_back(child.group);
      const FeatureGroup& g = fm.groups[child.group];
      out << std::string(static_cast<std::size_t>(depth + 1), '\t') << ":g (" << g.id << ") "
          << (g.kind == GroupKind::alternative ? "[1,1]" : "[1,*]") << "\n";
      for (int m : g.members) self(self, m, depth + 2);
    }
  };
  write(write, 0, 0);
  out << "</feature_tree>\n<constraints>\n";
  for (std::size_t i = 0; i < fm.ctcs.size(); ++i) {
    out << "C" << (i + 1) << ":";
    for (std::size_t j = 0; j < fm.ctcs[i].size(); ++j) {
      if (j > 0) out << " or";
      const auto& lit = fm.ctcs[i][j];
      out << (j > 0 ? " " : "") << (lit.positive ? "" : "~") << fm.features[lit.feature].id;
    }
    out << "\n";
  }
  out << "</constraints>\n</feature_model>\n";
  return out.str();
}

// ---------------------------------------------------------------------------
// CSP translation

namespace {

std::string disjunction(const FeatureModel& fm, const std::vector<int>& members) {
  std::string s = "(";
  for (std::size_t i = 0; i < members.size(); ++i) {
    if (i > 0) s += " or ";
    s += fm.features[members[i]].id;
  }
  return s + ")";
}

std::string clause_text(const FeatureModel& fm, const Clause& clause) {
  std::string s;
  for (std::size_t i = 0; i < clause.size(); ++i) {
    if (i > 0) s += " or ";
    if (!clause[i].positive) s += "not ";
    s += fm.features[clause[i].feature].id;
  }
  return s;
}

}  // namespace

ConfigurationTask fm_to_csp(const FeatureModel& fm) {
  VariableTable vars;
  for (const auto& f : fm.features) vars.add(f.id, Domain::boolean());
  ConfigurationTask task;
  task.store = ConstraintStore(std::move(vars));
  int next_id = 0;
  auto add = [&](const std::string& text) {
    task.kb.push_back(task.store.add("c" + std::to_string(++next_id), text));
  };

  add(fm.features[0].id + " == 1");
  for (const auto& f : fm.features) {
    if (f.relation == Relation::mandatory) add(f.id + " <-> " + fm.features[f.parent].id);
    else if (f.relation == Relation::optional) add(f.id + " -> " + fm.features[f.parent].id);
  }
  for (const auto& g : fm.groups) {
    const std::string& p = fm.features[g.parent].id;
    for (int m : g.members) add(fm.features[m].id + " -> " + p);
    if (g.kind == GroupKind::or_group) {
      add(p + " <-> " + disjunction(fm, g.members));
    } else {
      add(p + " -> " + disjunction(fm, g.members));
      for (std::size_t i = 0; i < g.members.size(); ++i)
        for (std::size_t j = i + 1; j < g.members.size(); ++j)
          add("not (" + fm.features[g.members[i]].id + " and " + fm.features[g.members[j]].id + ")");
    }
  }
  for (const auto& clause : fm.ctcs) add(clause_text(fm, clause));
  return task;
}

// ---------------------------------------------------------------------------
// Generation

void GenerationParams::validate() const {
  if (num_features < 2) throw ValidationError("num_features must be at least 2");
  if (max_children < 1) throw ValidationError("max_children must be at least 1");
  if (ctc_fraction < 0.0 || ctc_fraction > 1.0) throw ValidationError("ctc_fraction must lie in [0, 1]");
  const double ps[] = {p_mandatory, p_optional, p_or, p_alternative};
  for (double p : ps)
    if (p < 0.0) throw ValidationError("branch probabilities must be non-negative");
  if (std::abs(p_mandatory + p_optional + p_or + p_alternative - 1.0) > 1e-9)
    throw ValidationError("branch probabilities must sum to 1");
}

FeatureModel generate_random_fm(const GenerationParams& params) {
  params.validate();
  std::mt19937_64 rng(params.seed);
  FeatureModel fm;
  fm.name = "random-" + std::to_string(params.num_features) + "-" + std::to_string(params.seed);
  auto new_feature = [&](int parent, Relation rel, int group) {
    const int index = static_cast<int>(fm.features.size());
    const std::string id = "f" + std::to_string(index);
    fm.features.push_back(Feature{id, id, parent, rel, group, {}});
    if (parent >= 0) fm.features[parent].children.push_back(index);
    return index;
  };
  new_feature(-1, Relation::root, -1);

  std::discrete_distribution<int> branch({params.p_mandatory, params.p_optional, params.p_or, params.p_alternative});
  std::uniform_int_distribution<int> fanout(1, params.max_children);
  std::size_t frontier = 0;  // breadth-first over fm.features
  while (static_cast<int>(fm.features.size()) < params.num_features) {
    const int parent = static_cast<int>(frontier++);
    const int k = std::min(fanout(rng), params.num_features - static_cast<int>(fm.features.size()));
    const int type = branch(rng);
    if (type >= 2 && k >= 2) {
      const int g = static_cast<int>(fm.groups.size());
      fm.groups.push_back(FeatureGroup{"g" + std::to_string(g), parent,
                                       type == 2 ? GroupKind::or_group : GroupKind::alternative, {}});
      for (int i = 0; i < k; ++i) fm.groups[g].members.push_back(new_feature(parent, Relation::grouped, g));
    } else {
      const Relation rel = type == 0 ? Relation::mandatory : Relation::optional;
      for (int i = 0; i < k; ++i) new_feature(parent, rel, -1);
    }
  }

  const auto target = static_cast<std::size_t>(std::llround(params.ctc_fraction * params.num_features));
  std::uniform_int_distribution<int> pick(0, params.num_features - 1);
  std::bernoulli_distribution requires_kind(0.5);
  while (fm.ctcs.size() < target) {
    bool placed = false;
    for (int attempt = 0; attempt < params.max_ctc_retries && !placed; ++attempt) {
      const int a = pick(rng);
      const int b = pick(rng);
      const bool req = requires_kind(rng);
      if (a == b || fm.is_ancestor(a, b) || fm.is_ancestor(b, a)) continue;
      Clause clause{{a, false}, {b, !req}};
      if (std::find(fm.ctcs.begin(), fm.ctcs.end(), clause) != fm.ctcs.end()) continue;
      fm.ctcs.push_back(clause);
      const ConfigurationTask csp = fm_to_csp(fm);
      CheckSession session(std::nullopt, false);
      if (is_consistent(csp.store, csp.kb, session)) placed = true;
      else fm.ctcs.pop_back();
    }
    if (!placed)
      throw GenerationFailed("could not place cross-tree constraint " + std::to_string(fm.ctcs.size() + 1) +
                             " without voiding the model");
  }
  return fm;
}

std::vector<Value> sample_configuration(const FeatureModel& fm, std::uint64_t seed) {
  const ConfigurationTask csp = fm_to_csp(fm);
  CheckSession session;
  auto solution = solve(csp.store, csp.kb, session, {.value_seed = seed});
  if (!solution) throw UnsatisfiableModel();
  return solution->values;
}

std::vector<ExprSource> generate_reconfig_requirements(const FeatureModel& fm, const std::vector<Value>& current,
                                                       double fraction, std::uint64_t seed) {
  if (!(fraction > 0.0 && fraction <= 1.0)) throw ValidationError("fraction must lie in (0, 1]");
  ConfigurationTask csp = fm_to_csp(fm);
  const auto& vars = csp.store.variables();
  if (current.size() != vars.size()) throw ValidationError("configuration does not match the model");

  // Any configuration that differs from `current` somewhere.
  std::string differs;
  for (VarIndex v = 0; v < vars.size(); ++v) {
    if (v > 0) differs += " or ";
    differs += vars[v].name + " != " + std::to_string(current[v]);
  }
  ConstraintList constraints = csp.kb;
  constraints.push_back(csp.store.add("differs", differs));
  CheckSession session;
  auto other = solve(csp.store, constraints, session, {.value_seed = seed});
  if (!other) throw NoAlternativeSolution();

  const std::size_t n = vars.size();
  const auto count = std::clamp<std::size_t>(
      static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(n) - 1e-9)), 1, n);
  std::vector<VarIndex> chosen(n);
  for (VarIndex v = 0; v < n; ++v) chosen[v] = v;
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  std::shuffle(chosen.begin(), chosen.end(), rng);
  chosen.resize(count);
  std::sort(chosen.begin(), chosen.end());

  std::vector<ExprSource> out;
  for (std::size_t i = 0; i < chosen.size(); ++i)
    out.push_back({"r" + std::to_string(i + 1), vars[chosen[i]].name + " == " + std::to_string(other->values[chosen[i]])});
  return out;
}

ReconfigurationTask make_fm_reconfiguration_task(const FeatureModel& fm, const std::vector<Value>& current,
                                                 const std::vector<ExprSource>& requirements) {
  const ConfigurationTask csp = fm_to_csp(fm);
  const auto& vars = csp.store.variables();
  if (current.size() != vars.size()) throw ValidationError("configuration does not match the model");
  std::vector<AssignmentConstraint> solution;
  for (VarIndex v = 0; v < vars.size(); ++v) solution.push_back({"s" + std::to_string(v + 1), vars[v].name, current[v]});
  return make_reconfiguration_task(csp, solution, requirements);
}

}  // namespace flexdiag
