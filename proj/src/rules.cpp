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

#include "dpopt/rules.hpp"

#include <algorithm>
#include <chrono>

namespace dpopt {

std::string_view rule_class_name(RuleClass c) {
  switch (c) {
    case RuleClass::Arith: return "arith";
    case RuleClass::Logic: return "logic";
    case RuleClass::ConstExpansion: return "const_expansion";
    case RuleClass::ArithLogicExchange: return "arith_logic_exchange";
    case RuleClass::Merging: return "merging";
  }
  return "unknown";
}

std::optional<RuleClass> rule_class_from_name(std::string_view name) {
  for (RuleClass c : all_rule_classes())
    if (rule_class_name(c) == name) return c;
  return std::nullopt;
}

std::set<RuleClass> all_rule_classes() {
  return {RuleClass::Arith, RuleClass::Logic, RuleClass::ConstExpansion,
          RuleClass::ArithLogicExchange, RuleClass::Merging};
}

std::set<RuleClass> default_rule_classes() {
  auto s = all_rule_classes();
  s.erase(RuleClass::ConstExpansion);
  return s;
}

long long Bindings::operator()(const char *width_var) const {
  int i = vars_.width(width_var);
  if (i < 0) throw Error(std::string("rule refers to unknown width ") + width_var);
  return s_.w(i);
}

std::optional<Value> Bindings::k(const char *term) const {
  int i = vars_.term(term);
  if (i < 0) throw Error(std::string("rule refers to unknown term ") + term);
  return s_.c(i);
}

std::vector<int> RewriteRule::lhs_width_vars() const {
  std::vector<int> out;
  for (const PatNode &n : lhs.nodes)
    for (int v : {n.width.var, n.width.var2})
      if (v >= 0 && std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

// 2^u, saturated well above any width so comparisons stay meaningful.
long long p2(long long u) { return u >= 62 ? (1LL << 62) : (1LL << u); }

long long clog2(long long v) {
  long long r = 0;
  while (p2(r) < v) ++r;
  return r;
}

using B = const Bindings &;

struct RuleDef {
  const char *name;
  const char *row;
  RuleClass cls;
  const char *lhs;
  const char *rhs;
  const char *cond_text;
  Condition cond;
  std::vector<WidthSynth> synth = {};
  std::vector<std::pair<std::string, std::function<Value(B)>>> fns = {};
  bool supplementary = false;
};

RewriteRule build(RuleDef s) {
  RewriteRule r;
  r.name = s.name;
  r.row = s.row;
  r.rule_class = s.cls;
  r.supplementary = s.supplementary;
  r.lhs_text = s.lhs;
  r.rhs_text = s.rhs;
  r.condition_text = s.cond_text;
  r.vars = std::make_shared<PatternVars>();
  r.lhs = parse_pattern(r.lhs_text, *r.vars);
  std::vector<std::pair<std::string, ConstFn>> fns;
  std::weak_ptr<PatternVars> weak = r.vars;
  for (auto &[name, fn] : s.fns)
    fns.emplace_back(name, [weak, fn = fn](const Substitution &sub) {
      return fn(Bindings(*weak.lock(), sub));
    });
  r.rhs = parse_pattern(r.rhs_text, *r.vars, fns);
  r.condition = std::move(s.cond);
  r.synth = std::move(s.synth);
  for (const auto &ws : r.synth)
    if (r.vars->width(ws.var) < 0) throw Error("rule " + r.name + ": unknown free width " + ws.var);
  return r;
}

bool yes(B) { return true; }

std::vector<RewriteRule> make_table() {
  using RC = RuleClass;
  std::vector<RuleDef> defs = {
      // arithmetic identities
      {"Commutativity (+)", "Commutativity", RC::Arith, "(+ r ?a:p ?b:q)", "(+ r ?b:q ?a:p)",
       "true", yes},
      {"Commutativity (*)", "Commutativity", RC::Arith, "(* r ?a:p ?b:q)", "(* r ?b:q ?a:p)",
       "true", yes},
      {"Mult Associativity", "Mult Associativity", RC::Arith,
       "(* t (* u ?a:p ?b:r) ?c:s)", "(* t ?a:p (* q ?b:r ?c:s))",
       "(q >= t or r+s <= q) and (u >= t or p+r <= u)",
       [](B v) {
         return (v("q") >= v("t") || v("r") + v("s") <= v("q")) &&
                (v("u") >= v("t") || v("p") + v("r") <= v("u"));
       },
       {{"q", "min(t, r+s)", [](B v) { return std::min(v("t"), v("r") + v("s")); }}}},
      {"Add Associativity", "Add Associativity", RC::Arith,
       "(+ t (+ u ?a:p ?b:r) ?c:s)", "(+ t ?a:p (+ q ?b:r ?c:s))",
       "(q >= t or max(r,s) < q) and (u >= t or max(p,r) < u)",
       [](B v) {
         return (v("q") >= v("t") || std::max(v("r"), v("s")) < v("q")) &&
                (v("u") >= v("t") || std::max(v("p"), v("r")) < v("u"));
       },
       {{"q", "min(t, max(r,s)+1)",
         [](B v) { return std::min(v("t"), std::max(v("r"), v("s")) + 1); }}}},
      {"Distribute Mult over Add", "Distribute Mult over Add", RC::Arith,
       "(* r ?a:p (+ q ?b:s ?c:t))", "(+ r (* u ?a:p ?b:s) (* v ?a:p ?c:t))",
       "min(q,u,v) >= r",
       [](B v) { return std::min({v("q"), v("u"), v("v")}) >= v("r"); },
       {{"u", "r", [](B v) { return v("r"); }}, {"v", "r", [](B v) { return v("r"); }}}},
      {"Sum Same", "Sum Same", RC::Arith, "(+ q ?a:p ?a:p)", "(* q (const 2 2) ?a:p)", "true",
       yes},
      {"Mult Sum Same", "Mult Sum Same", RC::Arith, "(+ r (* s ?a:p ?b:q) ?b:q)",
       "(* r (+ t ?a:p (const 1 1)) ?b:q)", "t > p and s >= p+q",
       [](B v) { return v("t") > v("p") && v("s") >= v("p") + v("q"); },
       {{"t", "p+1", [](B v) { return v("p") + 1; }}}},
      {"Add Zero", "Add Zero", RC::Arith, "(+ p ?a:p ?b#:q)", "?a:p", "b = 0 mod 2^p",
       [](B v) {
         auto b = v.k("b");
         return b && (*b & mask(static_cast<Width>(v("p")))) == 0;
       }},
      // the negation must be at least as wide as the result: -b taken mod 2^q
      // and then zero-extended is not -b mod 2^r
      {"Sub to Neg", "Sub to Neg", RC::Arith, "(- r ?a:p ?b:q)", "(+ r ?a:p (neg n ?b:q))",
       "n >= r", [](B v) { return v("n") >= v("r"); },
       {{"n", "r", [](B v) { return v("r"); }}}},
      {"Mult by One", "Mult by One", RC::Arith, "(* p ?a:p ?b#:q)", "?a:p", "b = 1 mod 2^p",
       [](B v) {
         auto b = v.k("b");
         return b && (*b & mask(static_cast<Width>(v("p")))) == 1;
       }},
      {"Mult by Two", "Mult by Two", RC::Arith, "(* r ?a:p (const 2 2))",
       "(<< r ?a:p (const 1 1))", "true", yes},

      // bit-level identities
      {"Merge Left Shift", "Merge Left Shift", RC::Logic, "(<< r (<< u ?a:p ?b:q) ?c:s)",
       "(<< r ?a:p (+ t ?b:q ?c:s))", "t > max(q,s) and u >= r",
       [](B v) { return v("t") > std::max(v("q"), v("s")) && v("u") >= v("r"); },
       {{"t", "max(q,s)+1", [](B v) { return std::max(v("q"), v("s")) + 1; }}}},
      {"Merge Right Shift", "Merge Right Shift", RC::Logic, "(>> r (>> u ?a:p ?b:q) ?c:s)",
       "(>> r ?a:p (+ t ?b:q ?c:s))", "t > max(q,s) and u >= p",
       [](B v) { return v("t") > std::max(v("q"), v("s")) && v("u") >= v("p"); },
       {{"t", "max(q,s)+1", [](B v) { return std::max(v("q"), v("s")) + 1; }}}},
      {"Redundant Sel", "Redundant Sel", RC::Logic, "(mux p ?b:1 ?a:p ?a:p)", "?a:p", "true",
       yes},
      {"Neg Not", "Neg Not", RC::Logic, "(neg r ?a:p)", "(+ r (~ p ?a:p) (const 1 1))",
       "r <= p", [](B v) { return v("r") <= v("p"); }},
      {"Not over Con", "Not over Con", RC::Logic, "(~ r (concat q+s ?a:q ?b:s))",
       "(concat r (~ q ?a:q) (~ s ?b:s))", "q+s >= r",
       [](B v) { return v("q") + v("s") >= v("r"); }},

      // constant expansion (off by default)
      {"Mult Constant", "Mult Constant", RC::ConstExpansion, "(* r ?c#:q ?x:p)",
       "(+ r (* r (* q (const 2 2) (const @hi q-1)) ?x:p) (* p (const @lo 1) ?x:p))",
       "c is a constant",
       // q >= 2 keeps the halved constant at a legal width
       [](B v) { return v.k("c").has_value() && v("q") >= 2; },
       {},
       {{"hi", [](B v) { return (*v.k("c") & mask(static_cast<Width>(v("q")))) >> 1; }},
        {"lo", [](B v) { return *v.k("c") & 1; }}}},
      {"One to Two Mult", "One to Two Mult", RC::ConstExpansion, "(* p (const 1 1) ?x:p)",
       "(- p (* q (const 2 2) ?x:p) ?x:p)", "q > p",
       [](B v) { return v("q") > v("p"); },
       {{"q", "p+1", [](B v) { return v("p") + 1; }}}},

      // exchanges between arithmetic and bit-level operators
      {"Left Shift Add", "Left Shift Add", RC::ArithLogicExchange,
       "(<< r (+ s ?a:p ?b:q) ?c:t)", "(+ r (<< u ?a:p ?c:t) (<< u ?b:q ?c:t))",
       "(s >= r or max(p,q) < s) and u >= r",
       [](B v) {
         return (v("s") >= v("r") || std::max(v("p"), v("q")) < v("s")) && v("u") >= v("r");
       },
       {{"u", "r", [](B v) { return v("r"); }}}},
      {"Add Right Shift", "Add Right Shift", RC::ArithLogicExchange,
       "(+ r ?a:p (>> q ?b:t ?c:u))", "(>> r (+ v (<< s ?a:p ?c:u) ?b:t) ?c:u)",
       "q >= t and s >= p + 2^u - 1 and v > max(s,t)",
       [](B v) {
         return v("q") >= v("t") && v("s") >= v("p") + p2(v("u")) - 1 &&
                v("v") > std::max(v("s"), v("t"));
       },
       {{"s", "p + 2^u - 1", [](B v) { return v("p") + p2(v("u")) - 1; }},
        {"v", "max(s,t)+1", [](B v) { return std::max(v("s"), v("t")) + 1; }}}},
      {"Left Shift Mult", "Left Shift Mult", RC::ArithLogicExchange,
       "(<< r (* t ?a:p ?b:q) ?c:u)", "(* r (<< v ?a:p ?c:u) ?b:q)",
       "t >= r and (v >= r or v >= p + 2^u - 1)",
       [](B v) {
         return v("t") >= v("r") && (v("v") >= v("r") || v("v") >= v("p") + p2(v("u")) - 1);
       },
       {{"v", "min(r, p + 2^u - 1)",
         [](B v) { return std::min(v("r"), v("p") + p2(v("u")) - 1); }}}},
      {"Sel Add", "Sel Add", RC::ArithLogicExchange,
       "(mux r ?e:1 (+ r ?a:p ?b:q) (+ r ?c:p ?d:q))",
       "(+ r (mux p ?e:1 ?a:p ?c:p) (mux q ?e:1 ?b:q ?d:q))", "true", yes},
      {"Sel Add Zero", "Sel Add Zero", RC::ArithLogicExchange,
       "(mux p ?e:1 (+ p ?a:p ?b:q) ?c:p)",
       "(+ p (mux p ?e:1 ?a:p ?c:p) (mux q ?e:1 ?b:q (const 0 q)))", "true", yes},
      {"Move Sel Zero", "Move Sel Zero", RC::ArithLogicExchange,
       "(* r (mux p ?b:1 (const 0 p) ?a:p) ?c:q)", "(* r ?a:p (mux q ?b:1 (const 0 q) ?c:q))",
       "true", yes},
      {"Concat to Add", "Concat to Add", RC::ArithLogicExchange, "(concat r ?a:p ?b:q)",
       "(+ r (<< s ?a:p (const @q u)) ?b:q)", "s >= p + 2^u - 1 and u >= ceil(log2(q+1))",
       [](B v) {
         return v("s") >= v("p") + p2(v("u")) - 1 && v("u") >= clog2(v("q") + 1);
       },
       {{"u", "ceil(log2(q+1))", [](B v) { return clog2(v("q") + 1); }},
        {"s", "p + 2^u - 1", [](B v) { return v("p") + p2(v("u")) - 1; }}},
       {{"q", [](B v) { return static_cast<Value>(v("q")); }}}},

      // merging into compound operators
      {"Merge Additions", "Merge Additions", RC::Merging,
       "(+ q1 ?a:p1 (+ q2 ?b:p2 ?c:p3))", "(sum q1 ?a:p1 ?b:p2 ?c:p3)",
       "q1 > max(p1,q2) and q2 > max(p2,p3)",
       [](B v) {
         return v("q1") > std::max(v("p1"), v("q2")) && v("q2") > std::max(v("p2"), v("p3"));
       }},
      {"Merge Additions (absorb)", "Merge Additions", RC::Merging,
       "(+ q1 ?a:p1 (sum q2 ...))", "(sum q1 ?a:p1 ...)",
       "q1 > max(p1,q2) and 2^q2 > sum(2^pi - 1) over the inner operands",
       [](B v) {
         if (v("q1") <= std::max(v("p1"), v("q2"))) return false;
         long long total = 0;
         for (Width w : v.subst().tail_widths) total += p2(w) - 1;
         return p2(v("q2")) > total;
       }},
      {"Merge Mult Array", "Merge Mult Array", RC::Merging,
       "(+ t (* s ?a:q ?b:r) (* s ?c:q (~ r ?b:r)))", "(muxar t ?b:r ?a:q ?c:q)",
       "s >= q+r and t > s",
       [](B v) { return v("s") >= v("q") + v("r") && v("t") > v("s"); }},
      {"FMA Merge", "FMA Merge", RC::Merging, "(+ t (* s ?a:p ?b:q) ?c:r)",
       "(fma t ?a:p ?b:q ?c:r)", "s >= p+q and t > max(s,r)",
       [](B v) { return v("s") >= v("p") + v("q") && v("t") > std::max(v("s"), v("r")); }},
  };
  std::vector<RewriteRule> out;
  for (auto &s : defs) out.push_back(build(std::move(s)));
  return out;
}

std::vector<RewriteRule> make_supplementary() {
  std::vector<RewriteRule> out;
  // Shifting left then right by the same amount is the identity once the
  // intermediate is wide enough to keep every shifted-out bit.
  out.push_back(build(RuleDef{"Shift Cancel", "Shift Cancel", RuleClass::Logic,
                           "(>> p (<< u ?a:p ?b:q) ?b:q)", "?a:p", "u >= p + 2^q - 1",
                           [](B v) { return v("u") >= v("p") + p2(v("q")) - 1; },
                           {}, {}, true}));
  return out;
}

ClassId build_rhs(const RewriteRule &rule, int idx, const Substitution &s, EGraph &g) {
  const PatNode &n = rule.rhs.at(idx);
  auto width_of = [&](const WidthTerm &t) {
    long long w = eval_width(t, s);
    if (w < 1 || w > static_cast<long long>(kMaxWidth))
      throw Error("rule " + rule.name + ": rhs width out of range");
    return static_cast<Width>(w);
  };
  switch (n.kind) {
    case PatNode::Kind::Term:
    case PatNode::Kind::ConstTerm:
      return s.terms[static_cast<std::size_t>(n.term)];
    case PatNode::Kind::ConstLit:
    case PatNode::Kind::ConstFn: {
      Width w = width_of(n.width);
      Value v = n.kind == PatNode::Kind::ConstLit ? n.literal : n.fn(s);
      return g.add(ENode{Op::Const, w, {}, v & mask(w), {}});
    }
    case PatNode::Kind::Op: {
      ENode e{n.op, width_of(n.width), {}, 0, {}};
      for (int c : n.children) e.children.push_back(build_rhs(rule, c, s, g));
      if (n.variadic) e.children.insert(e.children.end(), s.tail.begin(), s.tail.end());
      return g.add(std::move(e));
    }
  }
  return kNoClass;
}

}  // namespace

const std::vector<RewriteRule> &rule_table() {
  static const std::vector<RewriteRule> table = make_table();
  return table;
}

const std::vector<RewriteRule> &supplementary_rules() {
  static const std::vector<RewriteRule> extra = make_supplementary();
  return extra;
}

std::vector<RewriteRule> select_rules(const std::set<RuleClass> &classes) {
  std::vector<RewriteRule> out;
  for (const auto *list : {&rule_table(), &supplementary_rules()})
    for (const auto &r : *list)
      if (classes.count(r.rule_class)) out.push_back(r);
  return out;
}

const RewriteRule &find_rule(const std::string &name) {
  for (const auto *list : {&rule_table(), &supplementary_rules()})
    for (const auto &r : *list)
      if (r.name == name) return r;
  throw Error("unknown rule: " + name);
}

std::optional<Substitution> synthesize_free_widths(const RewriteRule &rule, Substitution s) {
  for (const auto &ws : rule.synth) {
    int var = rule.vars->width(ws.var);
    if (s.w(var) != 0) continue;
    long long w = ws.fn(Bindings(*rule.vars, s));
    if (w < 1 || w > static_cast<long long>(kMaxWidth)) return std::nullopt;
    s.widths[static_cast<std::size_t>(var)] = static_cast<Width>(w);
  }
  return s;
}

bool check_condition(const RewriteRule &rule, const Substitution &s) {
  for (const auto &ws : rule.synth)
    if (s.w(rule.vars->width(ws.var)) == 0) {
      auto full = synthesize_free_widths(rule, s);
      return full && rule.condition(Bindings(*rule.vars, *full));
    }
  return rule.condition(Bindings(*rule.vars, s));
}

bool check_condition(const RewriteRule &rule, const Substitution &s, const EGraph &g) {
  Substitution fresh = s;
  for (std::size_t i = 0; i < fresh.terms.size(); ++i)
    if (fresh.terms[i] != kNoClass) fresh.consts[i] = g.constant(fresh.terms[i]);
  return check_condition(rule, fresh);
}

ClassId instantiate_rhs(const RewriteRule &rule, const Substitution &s, EGraph &g) {
  return build_rhs(rule, rule.rhs.root, s, g);
}

RunReport run_saturation(EGraph &g, const std::vector<RewriteRule> &rules,
                         const RunLimits &limits) {
  using Clock = std::chrono::steady_clock;
  const auto start = Clock::now();
  auto out_of_time = [&] {
    return std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - start)
               .count() > limits.time_budget_ms;
  };

  RunReport rep;
  g.set_max_nodes(limits.max_nodes);
  g.rebuild();

  struct Pending {
    const RewriteRule *rule;
    Substitution subst;
    ClassId eclass;
  };

  for (int iter = 1; iter <= limits.max_iterations; ++iter) {
    if (out_of_time()) {
      rep.stop_reason = StopReason::TimeLimit;
      return rep;
    }
    const std::uint64_t before = g.version();
    bool timed_out = false, match_limit = false;
    std::vector<Pending> todo;
    const std::vector<ClassId> classes = g.class_ids();
    for (const RewriteRule &rule : rules) {
      if (out_of_time()) {
        timed_out = true;
        break;
      }
      for (ClassId c : classes) {
        for (Match &m : ematch_class(g, rule.lhs, c, rule.n_terms(), rule.n_widths())) {
          auto full = synthesize_free_widths(rule, std::move(m.subst));
          if (!full) {
            ++rep.skipped_cap;
            continue;
          }
          if (!rule.condition(Bindings(*rule.vars, *full))) continue;
          todo.push_back(Pending{&rule, std::move(*full), m.eclass});
        }
        if (todo.size() >= limits.max_matches) {
          match_limit = true;
          break;
        }
      }
      if (match_limit) break;
    }

    bool node_limit = false;
    std::size_t applied = 0;
    try {
      for (const Pending &p : todo) {
        ClassId rhs = instantiate_rhs(*p.rule, p.subst, g);
        if (g.find(rhs) != g.find(p.eclass)) {
          g.merge(rhs, p.eclass);
          ++applied;
        }
      }
    } catch (const NodeLimitError &) {
      node_limit = true;
    }
    g.rebuild();

    rep.iterations_run = iter;
    rep.node_counts.push_back(g.node_count());
    rep.class_counts.push_back(g.class_count());
    rep.applications.push_back(applied);
    if (node_limit) {
      rep.stop_reason = StopReason::NodeLimit;
      return rep;
    }
    if (timed_out) {
      rep.stop_reason = StopReason::TimeLimit;
      return rep;
    }
    if (match_limit) {
      rep.stop_reason = StopReason::MatchLimit;
      return rep;
    }
    if (g.version() == before) {
      rep.saturated = true;
      rep.stop_reason = StopReason::Saturated;
      return rep;
    }
  }
  rep.stop_reason = StopReason::IterationLimit;
  return rep;
}

}  // namespace dpopt
