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

#include <chrono>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include "dpopt/benchmarks.hpp"

namespace dpopt {

std::string_view backend_name(ExtractBackend b) {
  return b == ExtractBackend::Greedy ? "greedy" : "ilp";
}

std::string_view check_mode_name(CheckMode m) {
  switch (m) {
    case CheckMode::Auto: return "auto";
    case CheckMode::Exhaustive: return "exhaustive";
    case CheckMode::Sampled: return "sampled";
    case CheckMode::None: return "none";
  }
  return "unknown";
}

void RunConfig::validate() const {
  if (input_path.empty() == bench.empty())
    throw Error("give exactly one of an input file or a benchmark name");
  if (limits.max_iterations < 1) throw Error("iteration limit must be positive");
  if (limits.max_nodes < 1) throw Error("node limit must be positive");
  if (limits.max_matches < 1) throw Error("match limit must be positive");
  if (limits.time_budget_ms < 1) throw Error("time budget must be positive");
  if (ilp_budget_ms < 1) throw Error("ILP budget must be positive");
  if (param && bench.empty()) throw Error("a width parameter needs a benchmark");
}

std::set<RuleClass> RunConfig::effective_rules() const {
  if (rules) return *rules;
  auto s = default_rule_classes();
  if (!bench.empty() && benchmark_info(bench).const_expansion) s.insert(RuleClass::ConstExpansion);
  return s;
}

Design load_design(const RunConfig &cfg) {
  if (!cfg.bench.empty()) return benchmark(cfg.bench, cfg.param);
  std::ifstream f(cfg.input_path);
  if (!f) throw Error("cannot open " + cfg.input_path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_design(ss.str());
}

namespace {

class PhaseClock {
 public:
  explicit PhaseClock(std::vector<std::pair<std::string, double>> &out) : out_(out) {}
  template <typename F>
  auto run(const std::string &phase, F &&f) {
    auto t0 = std::chrono::steady_clock::now();
    auto stop = [&] {
      out_.emplace_back(phase, std::chrono::duration<double, std::milli>(
                                   std::chrono::steady_clock::now() - t0)
                                   .count());
    };
    try {
      if constexpr (std::is_void_v<decltype(f())>) {
        f();
        stop();
      } else {
        auto r = f();
        stop();
        return r;
      }
    } catch (const PhaseError &) {
      throw;
    } catch (const std::exception &e) {
      throw PhaseError(phase, e.what());
    }
  }

 private:
  std::vector<std::pair<std::string, double>> &out_;
};

}  // namespace

RunArtifacts run_pipeline(const RunConfig &cfg) {
  cfg.validate();
  RunArtifacts a;
  a.backend = cfg.extract;
  PhaseClock clock(a.timings_ms);
  const auto t_start = std::chrono::steady_clock::now();

  a.original = clock.run("parse", [&] { return load_design(cfg); });

  EGraph g(cfg.limits.max_nodes);
  std::vector<ClassId> roots;
  clock.run("saturate", [&] {
    for (const auto &[name, e] : a.original.outputs) roots.push_back(g.add_expr(e));
    a.saturation = run_saturation(g, select_rules(cfg.effective_rules()), cfg.limits);
    for (auto &r : roots) r = g.find(r);
    a.egraph_nodes = g.node_count();
    a.egraph_classes = g.class_count();
  });

  clock.run("extract", [&] {
    Selection sel;
    if (cfg.extract == ExtractBackend::Greedy) {
      sel = extract_greedy(g, roots, cfg.cost);
    } else {
      IlpModel m = build_ilp(g, roots, cfg.cost);
      IlpResult r = solve_ilp(m, cfg.ilp_budget_ms);
      a.ilp_status = r.status;
      a.ilp_explored = r.explored;
      if (r.status != IlpStatus::Optimal && r.status != IlpStatus::Feasible)
        throw Error(std::string("ILP returned ") + std::string(ilp_status_name(r.status)));
      sel = std::move(r.selection);
    }
    a.selected_classes = sel.chosen.size();
    std::vector<std::string> names;
    for (const auto &o : a.original.outputs) names.push_back(o.first);
    a.optimized = selection_to_design(sel, g, a.original.inputs, names);
    a.original_cost = design_cost(a.original, cfg.cost);
    a.extracted_cost = design_cost(a.optimized, cfg.cost);
    a.optimized_cost = a.extracted_cost;
    if (a.extracted_cost > a.original_cost) {
      a.kept_original = true;
      a.optimized = a.original;
      a.optimized_cost = a.original_cost;
    }
  });

  if (cfg.check != CheckMode::None) {
    a.verdict = clock.run("verify", [&] {
      const unsigned bits = a.original.total_input_bits();
      bool exhaustive = cfg.check == CheckMode::Exhaustive ||
                        (cfg.check == CheckMode::Auto && bits <= kExhaustiveBitLimit);
      return exhaustive ? equiv_exhaustive(a.original, a.optimized)
                        : equiv_sampled(a.original, a.optimized, cfg.samples, cfg.seed);
    });
  }

  a.fingerprint = fingerprint(a.optimized);
  a.timings_ms.emplace_back(
      "total",
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t_start).count());
  return a;
}

std::string fingerprint(const Design &d) {
  // canonical numbering by first visit from the outputs in order
  std::unordered_map<const Expr *, std::size_t> id;
  std::ostringstream text;
  std::vector<const Expr *> order;
  auto visit = [&](auto &&self, const Expr *e) -> std::size_t {
    if (auto it = id.find(e); it != id.end()) return it->second;
    std::vector<std::size_t> kids;
    for (const auto &c : e->children) kids.push_back(self(self, c.get()));
    std::size_t n = id.size();
    id.emplace(e, n);
    text << "n" << n << "=" << op_name(e->op);
    if (e->op == Op::Var) text << ":" << e->name;
    text << "(";
    for (std::size_t i = 0; i < kids.size(); ++i) text << (i ? "," : "") << "n" << kids[i];
    text << ");";
    return n;
  };
  ExprInterner interner;
  for (const auto &[name, e] : d.outputs) {
    std::size_t n = visit(visit, interner.intern(e).get());
    text << name << "=n" << n << ";";
  }
  // 64-bit FNV-1a
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : text.str()) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  std::ostringstream hex;
  hex << std::hex;
  hex.width(16);
  hex.fill('0');
  hex << h;
  return hex.str();
}

std::map<std::string, std::size_t> op_histogram(const Design &d) {
  ExprInterner interner;
  Design shared = d;
  for (auto &[name, e] : shared.outputs) e = interner.intern(e);
  std::map<std::string, std::size_t> h;
  for (const Expr *e : topo_order(shared)) ++h[std::string(op_name(e->op))];
  return h;
}

std::vector<SweepPoint> run_sweep(const RunConfig &base, Width start, Width stop, Width step) {
  if (step < 1 || start > stop) throw Error("sweep: empty range");
  if (base.bench.empty() || !benchmark_info(base.bench).parameterized)
    throw Error("sweep needs a parameterized benchmark");
  std::vector<SweepPoint> out;
  for (Width v = start; v <= stop; v += step) {
    SweepPoint pt;
    pt.value = v;
    RunConfig cfg = base;
    cfg.param = v;
    try {
      pt.result = run_pipeline(cfg);
      pt.fingerprint = pt.result->fingerprint;
    } catch (const std::exception &e) {
      pt.error = e.what();
    }
    out.push_back(std::move(pt));
  }
  return out;
}

}  // namespace dpopt
