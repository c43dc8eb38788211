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

#include "flexdiag/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <filesystem>
#include <random>
#include <thread>

#include "flexdiag/error.hpp"
#include "json.hpp"

namespace flexdiag {

std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> path) {
  std::vector<std::uint32_t> words{static_cast<std::uint32_t>(master), static_cast<std::uint32_t>(master >> 32)};
  for (auto p : path) {
    words.push_back(static_cast<std::uint32_t>(p));
    words.push_back(static_cast<std::uint32_t>(p >> 32));
  }
  std::seed_seq seq(words.begin(), words.end());
  std::uint32_t out[2];
  seq.generate(out, out + 2);
  return (static_cast<std::uint64_t>(out[1]) << 32) | out[0];
}

namespace {

double ms(std::chrono::nanoseconds d) { return std::chrono::duration<double, std::milli>(d).count(); }

ScenarioResult base_row(const ReconfigurationTask& task, int m, const ScenarioLabel& label) {
  ScenarioResult r;
  r.model_id = label.model_id;
  r.num_vars = task.store.variables().size();
  r.num_constraints = task.kb.size();
  r.m = m;
  r.fraction = label.fraction;
  r.reorder_index = label.reorder_index;
  r.seed = label.seed;
  return r;
}

std::string status_error(DiagnosisStatus s) { return std::string(to_string(s)); }

}  // namespace

std::vector<ScenarioResult> run_scenario(const ReconfigurationTask& task, int m, int repeats,
                                         const ScenarioLabel& label, const SessionFactory& sessions,
                                         const std::optional<ConstraintList>& delta_min) {
  if (repeats < 1) throw ValidationError("repeats must be at least 1");
  const Granularity granularity(m);

  ConstraintList reference;
  std::string reference_error;
  if (delta_min) {
    reference = *delta_min;
  } else {
    CheckSession session = sessions();
    const Diagnosis d = diagnose(task, Granularity(1), session, {.precheck = true});
    if (d.status == DiagnosisStatus::found) reference = d.elements;
    else reference_error = status_error(d.status);
  }

  std::vector<ScenarioResult> rows;
  for (int repeat = 1; repeat <= repeats; ++repeat) {
    ScenarioResult row = base_row(task, m, label);
    row.repeat_index = repeat;
    CheckSession session = sessions();
    const Diagnosis d = diagnose(task, granularity, session, {.precheck = true});
    row.delta_size = d.elements.size();
    row.checks = d.total_checks();
    row.elapsed_ms = ms(d.elapsed);
    if (d.status != DiagnosisStatus::found) {
      row.error = status_error(d.status);
    } else if (!reference_error.empty() || reference.empty()) {
      row.error = "reference: " + (reference_error.empty() ? std::string("empty") : reference_error);
    } else {
      const QualityRecord q = quality(d.elements, reference);
      row.minimality = q.minimality;
      row.accuracy = q.accuracy;
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

void SuiteConfig::validate() const {
  if (models.empty()) throw ValidationError("suite lists no models");
  if (m_values.empty()) throw ValidationError("suite lists no m values");
  for (int m : m_values)
    if (m < 1) throw ValidationError("m values must be at least 1");
  if (fractions.empty()) throw ValidationError("suite lists no fractions");
  for (double f : fractions)
    if (!(f > 0.0 && f <= 1.0)) throw ValidationError("fractions must lie in (0, 1]");
  if (reorderings < 1) throw ValidationError("reorderings must be at least 1");
  if (repeats < 1) throw ValidationError("repeats must be at least 1");
  if (threads < 1) throw ValidationError("threads must be at least 1");
  for (const auto& model : models) {
    if (model.id.empty()) throw ValidationError("every model needs an id");
    if (model.sxfm_path.has_value() == model.generate.has_value())
      throw ValidationError("model '" + model.id + "' needs exactly one of sxfm or generate");
    if (model.generate) model.generate->validate();
  }
  if (evolutionary) evolutionary->validate();
}

SuiteConfig parse_suite_config(std::string_view document, const std::string& base_dir) {
  using nlohmann::json;
  json doc;
  try {
    doc = json::parse(document);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("suite config: ") + e.what());
  }
  if (!doc.is_object()) throw ValidationError("suite config must be a JSON object");

  SuiteConfig cfg;
  try {
    for (const auto& m : doc.at("models")) {
      SuiteModel model;
      model.id = m.at("id").get<std::string>();
      if (m.contains("sxfm")) {
        std::filesystem::path p = m.at("sxfm").get<std::string>();
        if (p.is_relative()) p = std::filesystem::path(base_dir) / p;
        model.sxfm_path = p.string();
      }
      if (m.contains("generate")) {
        const auto& g = m.at("generate");
        GenerationParams gp;
        gp.seed = 0;
        gp.num_features = g.value("features", gp.num_features);
        gp.ctc_fraction = g.value("ctc_fraction", gp.ctc_fraction);
        gp.max_children = g.value("max_children", gp.max_children);
        gp.p_mandatory = g.value("p_mandatory", gp.p_mandatory);
        gp.p_optional = g.value("p_optional", gp.p_optional);
        gp.p_or = g.value("p_or", gp.p_or);
        gp.p_alternative = g.value("p_alternative", gp.p_alternative);
        gp.seed = g.value("seed", gp.seed);
        gp.max_ctc_retries = g.value("max_ctc_retries", gp.max_ctc_retries);
        model.generate = gp;
      }
      cfg.models.push_back(std::move(model));
    }
    if (doc.contains("m")) cfg.m_values = doc.at("m").get<std::vector<int>>();
    if (doc.contains("fractions")) cfg.fractions = doc.at("fractions").get<std::vector<double>>();
    cfg.reorderings = doc.value("reorderings", cfg.reorderings);
    cfg.repeats = doc.value("repeats", cfg.repeats);
    cfg.master_seed = doc.value("seed", cfg.master_seed);
    cfg.threads = doc.value("threads", cfg.threads);
    if (doc.contains("reorder")) {
      const auto r = doc.at("reorder").get<std::string>();
      if (r == "solution") cfg.reorder = ReorderTarget::solution;
      else if (r == "requirements") cfg.reorder = ReorderTarget::requirements;
      else if (r == "none") cfg.reorder = ReorderTarget::none;
      else throw ValidationError("reorder must be \"solution\", \"requirements\" or \"none\"");
    }
    if (doc.contains("budget_ms") && !doc.at("budget_ms").is_null())
      cfg.budget = std::chrono::milliseconds(doc.at("budget_ms").get<std::int64_t>());
    if (doc.contains("evolutionary")) {
      const auto& e = doc.at("evolutionary");
      EvolutionParams ep;
      ep.seed = 0;
      ep.population_size = e.value("population", ep.population_size);
      ep.generations = e.value("generations", ep.generations);
      ep.crossover_rate = e.value("crossover", ep.crossover_rate);
      if (e.contains("mutation")) ep.mutation_rate = e.at("mutation").get<double>();
      ep.tournament_size = e.value("tournament", ep.tournament_size);
      ep.initial_bit_probability = e.value("initial_bit_probability", ep.initial_bit_probability);
      ep.seed = e.value("seed", ep.seed);
      cfg.evolutionary = ep;
    }
  } catch (const json::exception& e) {
    throw ValidationError(std::string("suite config: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

namespace {

struct PreparedModel {
  FeatureModel fm;
  std::vector<Value> configuration;
  std::string error;
};

PreparedModel prepare_model(const SuiteModel& model, std::size_t index, std::uint64_t master) {
  PreparedModel out;
  try {
    if (model.sxfm_path) {
      out.fm = parse_sxfm(read_file(*model.sxfm_path));
    } else {
      GenerationParams gp = *model.generate;
      if (gp.seed == 0) gp.seed = derive_seed(master, {index, 0});
      out.fm = generate_random_fm(gp);
    }
    out.configuration = sample_configuration(out.fm, derive_seed(master, {index, 1}));
  } catch (const std::exception& e) {
    out.error = e.what();
  }
  return out;
}

struct Unit {
  std::size_t model;
  std::size_t fraction;
  int reorder;
};

struct UnitResult {
  std::vector<ScenarioResult> rows;
  std::optional<EvolutionaryRow> evolutionary;
};

UnitResult run_unit(const SuiteConfig& cfg, const PreparedModel& prepared, const Unit& unit) {
  const SuiteModel& model = cfg.models[unit.model];
  const double fraction = cfg.fractions[unit.fraction];
  const std::uint64_t order_seed =
      derive_seed(cfg.master_seed, {unit.model, 2, unit.fraction, static_cast<std::uint64_t>(unit.reorder)});
  const ScenarioLabel label{model.id, fraction, unit.reorder, order_seed};

  UnitResult out;
  auto fail_all = [&](std::size_t num_vars, std::size_t num_constraints, const std::string& error) {
    for (int m : cfg.m_values) {
      for (int repeat = 1; repeat <= cfg.repeats; ++repeat) {
        ScenarioResult r;
        r.model_id = model.id;
        r.num_vars = num_vars;
        r.num_constraints = num_constraints;
        r.m = m;
        r.fraction = fraction;
        r.reorder_index = unit.reorder;
        r.repeat_index = repeat;
        r.seed = order_seed;
        r.error = error;
        out.rows.push_back(std::move(r));
      }
    }
    if (cfg.evolutionary) {
      EvolutionaryRow e;
      e.model_id = model.id;
      e.num_vars = num_vars;
      e.fraction = fraction;
      e.reorder_index = unit.reorder;
      e.status = error;
      out.evolutionary = std::move(e);
    }
    return out;
  };
  if (!prepared.error.empty()) return fail_all(0, 0, prepared.error);

  const SessionFactory sessions = [&cfg] { return CheckSession(cfg.budget); };
  std::optional<ReconfigurationTask> task;
  try {
    auto requirements = generate_reconfig_requirements(
        prepared.fm, prepared.configuration, fraction, derive_seed(cfg.master_seed, {unit.model, 3, unit.fraction}));
    if (cfg.reorder == ReorderTarget::requirements) {
      std::mt19937_64 rng(order_seed);
      std::shuffle(requirements.begin(), requirements.end(), rng);
    }
    task = make_fm_reconfiguration_task(prepared.fm, prepared.configuration, requirements);
    if (cfg.reorder == ReorderTarget::solution) {
      ConstraintList order = task->solution;
      std::mt19937_64 rng(order_seed);
      std::shuffle(order.begin(), order.end(), rng);
      const auto ids = task->store.ids(order);
      task = with_ordering(std::move(*task), ids);
    }
  } catch (const std::exception& e) {
    return fail_all(prepared.fm.features.size(), task ? task->kb.size() : 0, e.what());
  }

  std::optional<ConstraintList> delta_min;
  std::string reference_error;
  try {
    CheckSession session = sessions();
    const Diagnosis d = diagnose(*task, Granularity(1), session, {.precheck = true});
    if (d.status == DiagnosisStatus::found) delta_min = d.elements;
    else reference_error = std::string(to_string(d.status));
  } catch (const std::exception& e) {
    reference_error = e.what();
  }
  if (!delta_min) return fail_all(task->store.variables().size(), task->kb.size(), reference_error);

  for (int m : cfg.m_values) {
    try {
      auto rows = run_scenario(*task, m, cfg.repeats, label, sessions, delta_min);
      std::move(rows.begin(), rows.end(), std::back_inserter(out.rows));
    } catch (const std::exception& e) {
      for (int repeat = 1; repeat <= cfg.repeats; ++repeat) {
        ScenarioResult r = base_row(*task, m, label);
        r.repeat_index = repeat;
        r.error = e.what();
        out.rows.push_back(std::move(r));
      }
    }
  }

  if (cfg.evolutionary) {
    EvolutionaryRow row;
    row.model_id = model.id;
    row.num_vars = task->store.variables().size();
    row.fraction = fraction;
    row.reorder_index = unit.reorder;
    row.delta_min_size = delta_min->size();
    EvolutionParams params = *cfg.evolutionary;
    if (params.seed == 0) params.seed = derive_seed(cfg.master_seed, {unit.model, 4, unit.fraction,
                                                                      static_cast<std::uint64_t>(unit.reorder)});
    row.seed = params.seed;
    try {
      CheckSession session = sessions();
      const Diagnosis d = evolutionary_diagnose(*task, params, session);
      row.delta_size = d.elements.size();
      row.checks = d.total_checks();
      row.elapsed_ms = ms(d.elapsed);
      row.status = std::string(to_string(d.status));
      if (d.status == DiagnosisStatus::found && !d.elements.empty()) {
        row.minimality = minimality(d.elements, *delta_min);
        row.accuracy = accuracy(d.elements, *delta_min);
      }
    } catch (const BudgetExceeded&) {
      row.status = "budget-exceeded";
    } catch (const std::exception& e) {
      row.status = std::string("error: ") + e.what();
    }
    out.evolutionary = std::move(row);
  }
  return out;
}

std::string num(const char* format, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, format, v);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

SuiteResult run_suite(const SuiteConfig& config) {
  config.validate();
  std::vector<PreparedModel> models;
  for (std::size_t i = 0; i < config.models.size(); ++i) models.push_back(prepare_model(config.models[i], i, config.master_seed));

  std::vector<Unit> units;
  for (std::size_t m = 0; m < config.models.size(); ++m)
    for (std::size_t f = 0; f < config.fractions.size(); ++f)
      for (int r = 1; r <= config.reorderings; ++r) units.push_back({m, f, r});

  std::vector<UnitResult> results(units.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < units.size(); i = next++)
      results[i] = run_unit(config, models[units[i].model], units[i]);
  };
  const unsigned threads = std::min<std::size_t>(config.threads, units.size());
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }

  SuiteResult out;
  for (auto& r : results) {
    std::move(r.rows.begin(), r.rows.end(), std::back_inserter(out.rows));
    if (r.evolutionary) out.evolutionary.push_back(std::move(*r.evolutionary));
  }
  const bool any_ok = std::any_of(out.rows.begin(), out.rows.end(), [](const auto& r) { return r.error.empty(); });
  if (any_ok) out.summary = aggregate(out.rows);
  return out;
}

std::string suite_to_csv(const SuiteResult& result) {
  std::string csv =
      "model_id,num_vars,num_constraints,m,fraction,reorder_index,repeat_index,delta_size,checks,elapsed_ms,"
      "minimality,accuracy,seed,error\n";
  for (const auto& r : result.rows) {
    csv += csv_field(r.model_id) + ',' + std::to_string(r.num_vars) + ',' + std::to_string(r.num_constraints) + ',' +
           std::to_string(r.m) + ',' + num("%g", r.fraction) + ',' + std::to_string(r.reorder_index) + ',' +
           std::to_string(r.repeat_index) + ',' + std::to_string(r.delta_size) + ',' + std::to_string(r.checks) + ',' +
           num("%.3f", r.elapsed_ms) + ',' + num("%.6f", r.minimality) + ',' + num("%.6f", r.accuracy) + ',' +
           std::to_string(r.seed) + ',' + csv_field(r.error) + '\n';
  }
  csv += "\ngroup_vars,m,mean_delta_size,mean_checks,mean_time_ms,mean_minimality,mean_accuracy,n\n";
  for (const auto& s : result.summary) {
    csv += std::to_string(s.num_vars) + ',' + std::to_string(s.m) + ',' + num("%.6f", s.mean_delta_size) + ',' +
           num("%.6f", s.mean_checks) + ',' + num("%.3f", s.mean_time_ms) + ',' + num("%.6f", s.mean_minimality) + ',' +
           num("%.6f", s.mean_accuracy) + ',' + std::to_string(s.n) + '\n';
  }
  if (!result.evolutionary.empty()) {
    csv += "\nmodel_id,num_vars,fraction,reorder_index,delta_size,delta_min_size,checks,elapsed_ms,minimality,accuracy,"
           "status,seed\n";
    for (const auto& e : result.evolutionary) {
      csv += csv_field(e.model_id) + ',' + std::to_string(e.num_vars) + ',' + num("%g", e.fraction) + ',' +
             std::to_string(e.reorder_index) + ',' + std::to_string(e.delta_size) + ',' +
             std::to_string(e.delta_min_size) + ',' + std::to_string(e.checks) + ',' + num("%.3f", e.elapsed_ms) + ',' +
             (e.minimality ? num("%.6f", *e.minimality) : "") + ',' + (e.accuracy ? num("%.6f", *e.accuracy) : "") +
             ',' + csv_field(e.status) + ',' + std::to_string(e.seed) + '\n';
    }
  }
  return csv;
}

}  // namespace flexdiag
