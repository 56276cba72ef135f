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

#include <doctest.h>

#include <set>

#include "dpopt/benchmarks.hpp"
#include "dpopt/rules.hpp"
#include "dpopt/verify.hpp"

using namespace dpopt;

namespace {

Substitution widths_only(const RewriteRule &r, std::map<std::string, Width> w) {
  Substitution s(r.n_terms(), r.n_widths());
  for (const auto &[name, v] : w) s.widths[static_cast<std::size_t>(r.vars->width(name))] = v;
  return s;
}

Width synth(const RewriteRule &r, std::map<std::string, Width> w, const std::string &var) {
  auto s = synthesize_free_widths(r, widths_only(r, std::move(w)));
  REQUIRE(s.has_value());
  return s->w(r.vars->width(var));
}

RewriteRule with_synth(RewriteRule r, const std::string &var,
                       std::function<long long(const Bindings &)> fn) {
  for (auto &s : r.synth)
    if (s.var == var) s.fn = std::move(fn);
  r.condition = [](const Bindings &) { return true; };
  return r;
}

}  // namespace

TEST_SUITE("rules") {

TEST_CASE("catalog shape") {
  const auto &t = rule_table();
  CHECK(t.size() == 29);
  std::set<std::string> names, rows;
  for (const auto &r : t) {
    names.insert(r.name);
    rows.insert(r.row);
    CHECK_FALSE(r.supplementary);
  }
  CHECK(names.size() == t.size());
  CHECK(rows.size() == 27);
  REQUIRE(supplementary_rules().size() == 1);
  CHECK(supplementary_rules()[0].supplementary);
}

TEST_CASE("default classes leave constant expansion out") {
  for (const auto &r : select_rules(default_rule_classes()))
    CHECK(r.rule_class != RuleClass::ConstExpansion);
  auto all = select_rules(all_rule_classes());
  CHECK(all.size() == rule_table().size() + supplementary_rules().size());
  for (RuleClass c : all_rule_classes())
    CHECK(rule_class_from_name(rule_class_name(c)) == c);
}

TEST_CASE("free widths take their minimal feasible value") {
  CHECK(synth(find_rule("Add Associativity"), {{"t", 12}, {"u", 9}, {"p", 8}, {"r", 8}, {"s", 6}},
              "q") == 9);
  CHECK(synth(find_rule("Add Associativity"), {{"t", 5}, {"u", 9}, {"p", 8}, {"r", 8}, {"s", 6}},
              "q") == 5);
  CHECK(synth(find_rule("Mult Associativity"), {{"t", 16}, {"u", 9}, {"p", 8}, {"r", 4}, {"s", 3}},
              "q") == 7);
  CHECK(synth(find_rule("Add Right Shift"),
              {{"r", 20}, {"p", 8}, {"q", 12}, {"t", 12}, {"u", 2}}, "s") == 11);
}

TEST_CASE("a free width past 64 bits skips the match") {
  const RewriteRule &r = find_rule("Add Right Shift");
  auto s = synthesize_free_widths(r, widths_only(r, {{"r", 20}, {"p", 8}, {"q", 12}, {"t", 12}, {"u", 6}}));
  CHECK_FALSE(s.has_value());
}

TEST_CASE("every catalog rule replays soundly at widths up to 3") {
  for (const auto &r : select_rules(all_rule_classes())) {
    RuleCheckReport rep = check_rule_soundness(r, 3, 12);
    INFO(r.name);
    CHECK(rep.failures.empty());
    CHECK(rep.minimality_failures.empty());
    CHECK(rep.assignments_passing > 0);
  }
}

TEST_CASE("distribute without its condition is rejected") {
  RuleCheckReport rep = check_rule_soundness(corrupted_distribute_rule(), 3, 12);
  CHECK_FALSE(rep.failures.empty());
}

TEST_CASE("distribute counterexample evaluated by hand") {
  // r=2, a=b=c=1 and a 1-bit inner sum: a*((b+c) mod 2) = 0, a*b + a*c = 2
  const RewriteRule r = corrupted_distribute_rule();
  Substitution s = widths_only(r, {{"r", 2}, {"p", 1}, {"q", 1}, {"s", 1}, {"t", 1}});
  s = *synthesize_free_widths(r, s);
  RuleInstance inst = instantiate_rule(r, s);
  Env env{{"a", 1}, {"b", 1}, {"c", 1}};
  CHECK(eval_design(inst.lhs, env).begin()->second == 0);
  CHECK(eval_design(inst.rhs, env).begin()->second == 2);
}

TEST_CASE("sub to neg with the negation at the subtrahend's width is unsound") {
  // 0 - 1 at 2 bits is 3, while a 1-bit negation of 1 is 1
  RewriteRule narrow = with_synth(find_rule("Sub to Neg"), "n", [](const Bindings &v) { return v("q"); });
  RuleCheckReport rep = check_rule_soundness(narrow, 2, 12);
  CHECK_FALSE(rep.failures.empty());
  CHECK(check_rule_soundness(find_rule("Sub to Neg"), 2, 12).ok());
}

TEST_CASE("absorbing into a sum needs the inner sum to be exact") {
  RewriteRule loose = find_rule("Merge Additions (absorb)");
  loose.condition = [](const Bindings &v) { return v("q1") > std::max(v("p1"), v("q2")); };
  CHECK_FALSE(check_rule_soundness(loose, 3, 14).failures.empty());
}

TEST_CASE("saturation on (2*x)>>1 reaches x") {
  Design d = benchmark("fig1");
  EGraph g;
  ClassId root = g.add_expr(d.outputs[0].second);
  RunReport rep = run_saturation(g, select_rules(default_rule_classes()), RunLimits{});
  CHECK(rep.saturated);
  CHECK(rep.stop_reason == StopReason::Saturated);
  bool has_var = false;
  for (const ENode &n : g.eclass(root).nodes) has_var |= n.op == Op::Var;
  CHECK(has_var);
  CHECK(rep.node_counts.size() == static_cast<std::size_t>(rep.iterations_run));
}

TEST_CASE("saturation stops at the node limit") {
  Design d = benchmark("mcm");
  EGraph g;
  for (const auto &[n, e] : d.outputs) g.add_expr(e);
  RunLimits lim;
  lim.max_nodes = 500;
  RunReport rep = run_saturation(g, select_rules(all_rule_classes()), lim);
  CHECK(rep.stop_reason == StopReason::NodeLimit);
  CHECK_FALSE(rep.saturated);
  CHECK(g.node_count() <= 500);
}

TEST_CASE("saturation stops at the match limit") {
  Design d = benchmark("fir4", 8);
  EGraph g;
  for (const auto &[n, e] : d.outputs) g.add_expr(e);
  RunLimits lim;
  lim.max_matches = 5;
  RunReport rep = run_saturation(g, select_rules(default_rule_classes()), lim);
  CHECK(rep.stop_reason == StopReason::MatchLimit);
  CHECK(rep.iterations_run == 1);
}

TEST_CASE("iteration limit") {
  Design d = benchmark("fir4", 8);
  EGraph g;
  for (const auto &[n, e] : d.outputs) g.add_expr(e);
  RunLimits lim;
  lim.max_iterations = 2;
  RunReport rep = run_saturation(g, select_rules(default_rule_classes()), lim);
  CHECK(rep.stop_reason == StopReason::IterationLimit);
  CHECK(rep.iterations_run == 2);
}

}
