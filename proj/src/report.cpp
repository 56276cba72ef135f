// Copyright 2026 The dpopt Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "dpopt/pipeline.hpp"

namespace dpopt {

namespace {

nlohmann::json cost_json(const CostConfig &c) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto &[k, v] : c.items()) j[k] = v;
  return j;
}

nlohmann::json config_json(const RunConfig &cfg) {
  nlohmann::json j;
  if (!cfg.bench.empty()) j["benchmark"] = cfg.bench;
  if (!cfg.input_path.empty()) j["input"] = cfg.input_path;
  if (cfg.param) j["param"] = *cfg.param;
  j["rules"] = nlohmann::json::array();
  for (RuleClass c : cfg.effective_rules()) j["rules"].push_back(rule_class_name(c));
  j["max_iterations"] = cfg.limits.max_iterations;
  j["node_limit"] = cfg.limits.max_nodes;
  j["match_limit"] = cfg.limits.max_matches;
  j["time_budget_ms"] = cfg.limits.time_budget_ms;
  j["extract"] = backend_name(cfg.extract);
  j["ilp_budget_ms"] = cfg.ilp_budget_ms;
  j["check"] = check_mode_name(cfg.check);
  j["samples"] = cfg.samples;
  j["seed"] = cfg.seed;
  j["cost"] = cost_json(cfg.cost);
  if (!cfg.cost_config_path.empty()) j["cost_config_path"] = cfg.cost_config_path;
  return j;
}

}  // namespace

nlohmann::json report_json(const RunConfig &cfg, const RunArtifacts &a, bool include_timings) {
  nlohmann::json j;
  j["config"] = config_json(cfg);

  const RunReport &s = a.saturation;
  j["egraph"] = {{"iterations", s.iterations_run},
                 {"node_counts", s.node_counts},
                 {"class_counts", s.class_counts},
                 {"applications", s.applications},
                 {"skipped_width_cap", s.skipped_cap},
                 {"saturated", s.saturated},
                 {"stop_reason", stop_reason_name(s.stop_reason)},
                 {"nodes", a.egraph_nodes},
                 {"classes", a.egraph_classes}};

  j["cost"] = {{"original", a.original_cost},
               {"optimized", a.optimized_cost},
               {"extracted", a.extracted_cost},
               {"kept_original", a.kept_original}};

  nlohmann::json sel = {{"backend", backend_name(a.backend)},
                        {"classes", a.selected_classes},
                        {"operators", op_histogram(a.optimized)}};
  if (a.ilp_status) {
    sel["ilp_status"] = ilp_status_name(*a.ilp_status);
    sel["ilp_explored"] = a.ilp_explored;
  }
  j["selection"] = sel;

  if (a.verdict) j["verdict"] = to_json(*a.verdict);
  j["fingerprint"] = a.fingerprint;
  j["design"] = {{"original", print_design(a.original)},
                 {"optimized", print_design(a.optimized)}};
  if (include_timings) {
    nlohmann::json t = nlohmann::json::object();
    for (const auto &[phase, ms] : a.timings_ms) t[phase] = ms;
    j["timings_ms"] = t;
  }
  return j;
}

nlohmann::json sweep_json(const RunConfig &cfg, const std::vector<SweepPoint> &points) {
  nlohmann::json j;
  j["config"] = config_json(cfg);
  j["points"] = nlohmann::json::array();
  for (const auto &p : points) {
    nlohmann::json pt = {{"param", p.value}};
    if (p.result) {
      pt["fingerprint"] = p.fingerprint;
      pt["original_cost"] = p.result->original_cost;
      pt["optimized_cost"] = p.result->optimized_cost;
      pt["operators"] = op_histogram(p.result->optimized);
      pt["saturated"] = p.result->saturation.saturated;
      if (p.result->verdict) pt["verdict"] = verdict_status_name(p.result->verdict->status);
    } else {
      pt["error"] = p.error;
    }
    j["points"].push_back(pt);
  }
  return j;
}

nlohmann::json rules_json(const std::vector<RewriteRule> &rules) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto &r : rules) {
    nlohmann::json free = nlohmann::json::object();
    for (const auto &s : r.synth) free[s.var] = s.formula;
    arr.push_back({{"name", r.name},
                   {"row", r.row},
                   {"class", rule_class_name(r.rule_class)},
                   {"supplementary", r.supplementary},
                   {"lhs", r.lhs_text},
                   {"rhs", r.rhs_text},
                   {"condition", r.condition_text},
                   {"free_widths", free}});
  }
  return arr;
}

}  // namespace dpopt
