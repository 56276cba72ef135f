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

// Command-line driver: optimize, sweep, check-rules, bench-list, emit.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "dpopt/benchmarks.hpp"
#include "dpopt/pipeline.hpp"
#include "dpopt/verify.hpp"

namespace {

using namespace dpopt;

constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kPhaseFailure = 2;
constexpr int kEquivFailure = 3;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string input;
  std::string bench;
  int param = 0;
  std::string rules;
  int iters = 10;
  std::size_t node_limit = 100000;
  std::size_t match_limit = 1000000;
  std::int64_t time_budget_ms = 60000;
  std::string extract = "ilp";
  std::int64_t ilp_budget_ms = 100000;
  std::string check = "auto";
  std::uint64_t samples = 100000;
  std::string cost_config;
  std::uint64_t seed = 1;
  std::string emit = "sexpr";
  std::string out;
  std::string report;
};

void add_design_options(CLI::App *app, Options &o) {
  app->add_option("--input", o.input, "design file (s-expression)");
  app->add_option("--bench", o.bench, "registry benchmark name");
  app->add_option("--param", o.param, "width parameter of a parameterized benchmark");
}

void add_run_options(CLI::App *app, Options &o) {
  add_design_options(app, o);
  app->add_option("--rules", o.rules,
                  "comma-separated rule classes, or 'default' / 'all'");
  app->add_option("--iters", o.iters, "rewrite iteration limit")->capture_default_str();
  app->add_option("--node-limit", o.node_limit, "e-graph node limit")->capture_default_str();
  app->add_option("--match-limit", o.match_limit, "pending rewrites per iteration")
      ->capture_default_str();
  app->add_option("--time-budget-ms", o.time_budget_ms, "saturation time budget")
      ->capture_default_str();
  app->add_option("--extract", o.extract, "extraction backend")
      ->check(CLI::IsMember({"greedy", "ilp"}))
      ->capture_default_str();
  app->add_option("--ilp-budget-ms", o.ilp_budget_ms, "ILP time budget")->capture_default_str();
  app->add_option("--check", o.check, "equivalence check mode")
      ->check(CLI::IsMember({"auto", "exhaustive", "sampled", "none"}))
      ->capture_default_str();
  app->add_option("--samples", o.samples, "random samples in sampled mode")
      ->capture_default_str();
  app->add_option("--cost-config", o.cost_config, "key = value cost constants file");
  app->add_option("--seed", o.seed, "seed for sampled checking")->capture_default_str();
  app->add_option("--emit", o.emit, "output format")
      ->check(CLI::IsMember({"sexpr", "netlist", "json"}))
      ->capture_default_str();
  app->add_option("--out", o.out, "write the design here instead of stdout");
  app->add_option("--report", o.report, "write the JSON report here");
}

std::set<RuleClass> parse_rule_classes(const std::string &text) {
  if (text == "all") return all_rule_classes();
  if (text == "default") return default_rule_classes();
  std::set<RuleClass> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto c = rule_class_from_name(item);
    if (!c) throw UsageError("unknown rule class '" + item + "'");
    out.insert(*c);
  }
  if (out.empty()) throw UsageError("no rule classes given");
  return out;
}

RunConfig make_config(const Options &o) {
  RunConfig c;
  c.input_path = o.input;
  c.bench = o.bench;
  if (o.param > 0) c.param = static_cast<Width>(o.param);
  if (!o.rules.empty()) c.rules = parse_rule_classes(o.rules);
  c.limits.max_iterations = o.iters;
  c.limits.max_nodes = o.node_limit;
  c.limits.max_matches = o.match_limit;
  c.limits.time_budget_ms = o.time_budget_ms;
  c.extract = o.extract == "greedy" ? ExtractBackend::Greedy : ExtractBackend::Ilp;
  c.ilp_budget_ms = o.ilp_budget_ms;
  if (o.check == "exhaustive") c.check = CheckMode::Exhaustive;
  else if (o.check == "sampled") c.check = CheckMode::Sampled;
  else if (o.check == "none") c.check = CheckMode::None;
  c.samples = o.samples;
  if (!o.cost_config.empty()) {
    c.cost = CostConfig::load(o.cost_config);
    c.cost_config_path = o.cost_config;
  }
  c.seed = o.seed;
  if (o.emit == "netlist") c.emit = EmitFormat::Netlist;
  else if (o.emit == "json") c.emit = EmitFormat::Json;
  try {
    c.validate();
  } catch (const Error &e) {
    throw UsageError(e.what());
  }
  return c;
}

void write_text(const std::string &path, const std::string &text) {
  if (path.empty()) {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << "\n";
    return;
  }
  std::ofstream f(path);
  if (!f) throw Error("cannot write " + path);
  f << text;
  if (!text.empty() && text.back() != '\n') f << "\n";
}

std::string render(const Design &d, EmitFormat fmt) {
  switch (fmt) {
    case EmitFormat::Sexpr: return print_design(d);
    case EmitFormat::Netlist: return emit_netlist(d);
    case EmitFormat::Json: return nlohmann::json{{"design", print_design(d)}}.dump(2);
  }
  return "";
}

int cmd_optimize(const Options &o) {
  RunConfig cfg = make_config(o);
  RunArtifacts a = run_pipeline(cfg);
  nlohmann::json rep = report_json(cfg, a);
  if (cfg.emit == EmitFormat::Json)
    write_text(o.out, rep.dump(2));
  else
    write_text(o.out, render(a.optimized, cfg.emit));
  if (!o.report.empty()) write_text(o.report, rep.dump(2));
  std::cerr << "cost " << a.original_cost << " -> " << a.optimized_cost << ", "
            << a.saturation.iterations_run << " iterations ("
            << stop_reason_name(a.saturation.stop_reason) << "), " << a.egraph_nodes
            << " e-nodes";
  if (a.verdict) std::cerr << ", " << verdict_status_name(a.verdict->status);
  std::cerr << "\n";
  if (a.verdict && !a.verdict->equivalent()) return kEquivFailure;
  return kOk;
}

int cmd_sweep(const Options &o, int from, int to, int step) {
  if (from < 1 || to < from || step < 1) throw UsageError("bad sweep range");
  RunConfig cfg = make_config(o);
  auto points = run_sweep(cfg, static_cast<Width>(from), static_cast<Width>(to),
                          static_cast<Width>(step));
  nlohmann::json rep = sweep_json(cfg, points);
  bool failed = false, mismatch = false;
  for (const auto &p : points) {
    std::cout << p.value << "\t";
    if (p.result) {
      std::cout << p.fingerprint << "\t" << p.result->original_cost << " -> "
                << p.result->optimized_cost;
      if (p.result->verdict && !p.result->verdict->equivalent()) mismatch = true;
    } else {
      std::cout << "error: " << p.error;
      failed = true;
    }
    std::cout << "\n";
  }
  if (!o.report.empty()) write_text(o.report, rep.dump(2));
  if (mismatch) return kEquivFailure;
  return failed ? kPhaseFailure : kOk;
}

int cmd_check_rules(const std::string &classes, int max_width, unsigned budget, bool self_test,
                    bool list, const std::string &report, std::uint64_t seed) {
  std::vector<RewriteRule> rules =
      classes.empty() ? select_rules(all_rule_classes()) : select_rules(parse_rule_classes(classes));
  if (list) {
    std::cout << rules_json(rules).dump(2) << "\n";
    return kOk;
  }
  if (max_width < 1 || max_width > 8) throw UsageError("--max-width must be in [1, 8]");
  nlohmann::json rep = nlohmann::json::array();
  bool all_ok = true;
  for (const auto &r : rules) {
    RuleCheckReport c = check_rule_soundness(r, static_cast<Width>(max_width), budget, seed);
    all_ok = all_ok && c.ok();
    std::cout << (c.ok() ? "ok    " : "FAIL  ") << r.name << "  (" << c.assignments_passing
              << " of " << c.assignments_tried << " assignments, " << c.cases_checked
              << " cases)\n";
    rep.push_back(to_json(c));
  }
  bool self_ok = true;
  if (self_test) {
    RuleCheckReport c =
        check_rule_soundness(corrupted_distribute_rule(), static_cast<Width>(max_width), budget, seed);
    self_ok = !c.failures.empty();
    std::cout << (self_ok ? "ok    " : "FAIL  ") << "self-test: " << c.rule << " rejected with "
              << c.failures.size() << " counterexamples\n";
    nlohmann::json j = to_json(c);
    j["self_test"] = true;
    rep.push_back(j);
  }
  if (!report.empty()) write_text(report, rep.dump(2));
  return all_ok && self_ok ? kOk : kEquivFailure;
}

int cmd_bench_list(bool json) {
  if (json) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto &b : benchmark_registry())
      arr.push_back({{"name", b.name},
                     {"description", b.description},
                     {"parameterized", b.parameterized},
                     {"default_param", b.default_param},
                     {"const_expansion", b.const_expansion}});
    std::cout << arr.dump(2) << "\n";
    return kOk;
  }
  for (const auto &b : benchmark_registry()) std::cout << b.name << "\t" << b.description << "\n";
  return kOk;
}

int cmd_emit(const Options &o) {
  if (o.input.empty() == o.bench.empty()) throw UsageError("give exactly one of --input or --bench");
  RunConfig cfg;
  cfg.input_path = o.input;
  cfg.bench = o.bench;
  if (o.param > 0) cfg.param = static_cast<Width>(o.param);
  EmitFormat fmt = o.emit == "netlist" ? EmitFormat::Netlist
                   : o.emit == "json"  ? EmitFormat::Json
                                       : EmitFormat::Sexpr;
  Design d;
  try {
    d = load_design(cfg);
  } catch (const std::exception &e) {
    throw PhaseError("parse", e.what());
  }
  write_text(o.out, render(d, fmt));
  return kOk;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"dpopt: datapath optimization by equality saturation"};
  app.require_subcommand(1);

  Options opt;
  auto *optimize = app.add_subcommand("optimize", "saturate, extract and verify one design");
  add_run_options(optimize, opt);

  Options sweep_opt;
  int from = 4, to = 64, step = 4;
  auto *sweep = app.add_subcommand("sweep", "optimize a parameterized benchmark over widths");
  add_run_options(sweep, sweep_opt);
  sweep->add_option("--from", from)->capture_default_str();
  sweep->add_option("--to", to)->capture_default_str();
  sweep->add_option("--step", step)->capture_default_str();

  std::string classes, rule_report;
  int max_width = 4;
  unsigned budget = 16;
  bool self_test = false, list = false;
  std::uint64_t rule_seed = 1;
  auto *check = app.add_subcommand("check-rules", "replay every rewrite at small widths");
  check->add_option("--rules", classes, "comma-separated rule classes (default: all)");
  check->add_option("--max-width", max_width)->capture_default_str();
  check->add_option("--budget", budget, "input bits checked exhaustively")->capture_default_str();
  check->add_flag("--self-test", self_test, "also confirm a corrupted rule is rejected");
  check->add_flag("--list", list, "print the rule catalog as JSON and exit");
  check->add_option("--report", rule_report, "write the JSON report here");
  check->add_option("--seed", rule_seed)->capture_default_str();

  bool bench_json = false;
  auto *bench_list = app.add_subcommand("bench-list", "list registry benchmarks");
  bench_list->add_flag("--json", bench_json);

  Options emit_opt;
  auto *emit = app.add_subcommand("emit", "print a design without optimizing it");
  add_design_options(emit, emit_opt);
  emit->add_option("--emit", emit_opt.emit, "output format")
      ->check(CLI::IsMember({"sexpr", "netlist", "json"}));
  emit->add_option("--out", emit_opt.out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (*optimize) return cmd_optimize(opt);
    if (*sweep) return cmd_sweep(sweep_opt, from, to, step);
    if (*check)
      return cmd_check_rules(classes, max_width, budget, self_test, list, rule_report, rule_seed);
    if (*bench_list) return cmd_bench_list(bench_json);
    if (*emit) return cmd_emit(emit_opt);
  } catch (const UsageError &e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const PhaseError &e) {
    std::cerr << "error in " << e.phase() << " phase: " << e.what() << "\n";
    return kPhaseFailure;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return kPhaseFailure;
  }
  return kUsage;
}
