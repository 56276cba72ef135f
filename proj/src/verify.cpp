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

#include "dpopt/verify.hpp"

#include <algorithm>
#include <functional>
#include <random>
#include <set>

namespace dpopt {

std::string_view verdict_status_name(EquivVerdict::Status s) {
  switch (s) {
    case EquivVerdict::Status::Equivalent: return "equivalent";
    case EquivVerdict::Status::Counterexample: return "counterexample";
    case EquivVerdict::Status::Inconclusive: return "inconclusive";
  }
  return "unknown";
}

std::string_view verdict_mode_name(EquivVerdict::Mode m) {
  return m == EquivVerdict::Mode::Exhaustive ? "exhaustive" : "sampled";
}

namespace {

// Both designs compiled against a's input order and a's output order.
class PairRunner {
 public:
  PairRunner(const Design &a, const Design &b) : a_(a), ca_(a), cb_(reorder(a, b)) {
    vin_.resize(a.inputs.size());
    oa_.resize(a.outputs.size());
    ob_.resize(a.outputs.size());
  }

  // Returns the index of the first differing output, or -1.
  long run(const std::vector<Value> &in) {
    ca_.run(in, oa_);
    cb_.run(in, ob_);
    for (std::size_t i = 0; i < oa_.size(); ++i)
      if (oa_[i] != ob_[i]) return static_cast<long>(i);
    return -1;
  }

  void record(EquivVerdict &v, const std::vector<Value> &in, long out) const {
    v.status = EquivVerdict::Status::Counterexample;
    Env env;
    for (std::size_t i = 0; i < in.size(); ++i) env[a_.inputs[i].first] = in[i];
    v.counterexample = env;
    v.output = a_.outputs[static_cast<std::size_t>(out)].first;
    v.lhs_value = oa_[static_cast<std::size_t>(out)];
    v.rhs_value = ob_[static_cast<std::size_t>(out)];
  }

 private:
  static Design reorder(const Design &a, const Design &b) {
    auto sorted_inputs = [](const Design &d) {
      auto v = d.inputs;
      std::sort(v.begin(), v.end());
      return v;
    };
    if (sorted_inputs(a) != sorted_inputs(b))
      throw Error("equivalence check: designs have different inputs");
    if (a.outputs.size() != b.outputs.size())
      throw Error("equivalence check: designs have different outputs");
    Design r;
    r.inputs = a.inputs;
    for (const auto &[name, _] : a.outputs) {
      auto it = std::find_if(b.outputs.begin(), b.outputs.end(),
                             [&](const auto &o) { return o.first == name; });
      if (it == b.outputs.end())
        throw Error("equivalence check: output '" + name + "' missing");
      r.outputs.push_back(*it);
    }
    return r;
  }

  const Design &a_;
  CompiledDesign ca_;
  CompiledDesign cb_;
  std::vector<Value> vin_, oa_, ob_;
};

}  // namespace

EquivVerdict equiv_exhaustive(const Design &a, const Design &b) {
  unsigned bits = a.total_input_bits();
  if (bits > kExhaustiveBitLimit)
    throw Error("exhaustive check needs " + std::to_string(bits) + " input bits (limit " +
                std::to_string(kExhaustiveBitLimit) + "); use sampled mode");
  PairRunner run(a, b);
  EquivVerdict v;
  v.mode = EquivVerdict::Mode::Exhaustive;
  std::vector<Value> in(a.inputs.size());
  const std::uint64_t total = std::uint64_t{1} << bits;
  for (std::uint64_t k = 0; k < total; ++k) {
    std::uint64_t rest = k;
    for (std::size_t i = 0; i < in.size(); ++i) {
      Width w = a.inputs[i].second;
      in[i] = rest & mask(w);
      rest = w >= 64 ? 0 : rest >> w;
    }
    ++v.cases_checked;
    if (long o = run.run(in); o >= 0) {
      run.record(v, in, o);
      return v;
    }
  }
  v.status = EquivVerdict::Status::Equivalent;
  return v;
}

EquivVerdict equiv_sampled(const Design &a, const Design &b, std::uint64_t n,
                           std::uint64_t seed) {
  PairRunner run(a, b);
  EquivVerdict v;
  v.mode = EquivVerdict::Mode::Sampled;
  const std::size_t k = a.inputs.size();
  auto check = [&](const std::vector<Value> &in) {
    ++v.cases_checked;
    if (long o = run.run(in); o >= 0) {
      run.record(v, in, o);
      return false;
    }
    return true;
  };

  std::vector<Value> in(k, 0);
  if (!check(in)) return v;
  for (std::size_t i = 0; i < k; ++i) in[i] = mask(a.inputs[i].second);
  if (!check(in)) return v;
  for (std::size_t i = 0; i < k; ++i)
    for (Width bit = 0; bit < a.inputs[i].second; ++bit) {
      std::fill(in.begin(), in.end(), 0);
      in[i] = Value{1} << bit;
      if (!check(in)) return v;
    }
  std::mt19937_64 rng(seed);
  for (std::uint64_t s = 0; s < n; ++s) {
    for (std::size_t i = 0; i < k; ++i) in[i] = rng() & mask(a.inputs[i].second);
    if (!check(in)) return v;
  }
  v.status = EquivVerdict::Status::Equivalent;
  return v;
}

namespace {

const PatNode *find_term_node(const Pattern &p, int term) {
  for (const PatNode &n : p.nodes)
    if ((n.kind == PatNode::Kind::Term || n.kind == PatNode::Kind::ConstTerm) && n.term == term)
      return &n;
  return nullptr;
}

Width checked_width(const WidthTerm &t, const Substitution &s) {
  long long w = eval_width(t, s);
  if (w < 1 || w > static_cast<long long>(kMaxWidth))
    throw WidthError("pattern width " + std::to_string(w) + " outside [1, 64]");
  return static_cast<Width>(w);
}

ExprPtr build_expr(const Pattern &p, int idx, const Substitution &s,
                   const std::vector<ExprPtr> &terms, const std::vector<ExprPtr> &tail) {
  const PatNode &n = p.at(idx);
  switch (n.kind) {
    case PatNode::Kind::Term:
    case PatNode::Kind::ConstTerm:
      return terms[static_cast<std::size_t>(n.term)];
    case PatNode::Kind::ConstLit: {
      Width w = checked_width(n.width, s);
      return make_const(n.literal & mask(w), w);
    }
    case PatNode::Kind::ConstFn: {
      Width w = checked_width(n.width, s);
      return make_const(n.fn(s) & mask(w), w);
    }
    case PatNode::Kind::Op: {
      std::vector<ExprPtr> kids;
      for (int c : n.children) kids.push_back(build_expr(p, c, s, terms, tail));
      if (n.variadic) kids.insert(kids.end(), tail.begin(), tail.end());
      return make_op(n.op, checked_width(n.width, s), std::move(kids));
    }
  }
  return nullptr;
}

bool has_variadic(const Pattern &p) {
  return std::any_of(p.nodes.begin(), p.nodes.end(), [](const PatNode &n) { return n.variadic; });
}

}  // namespace

RuleInstance instantiate_rule(const RewriteRule &rule, const Substitution &s,
                              const std::vector<Width> &tail_widths) {
  const auto &vars = *rule.vars;
  Design base;
  std::vector<ExprPtr> terms(vars.terms.size());
  for (std::size_t t = 0; t < vars.terms.size(); ++t) {
    const PatNode *n = find_term_node(rule.lhs, static_cast<int>(t));
    if (!n) throw Error("rule " + rule.name + ": term ?" + vars.terms[t] + " not on the lhs");
    Width w = checked_width(n->width, s);
    if (n->kind == PatNode::Kind::ConstTerm) {
      auto k = s.c(static_cast<int>(t));
      if (!k) throw Error("rule " + rule.name + ": no value for constant ?" + vars.terms[t]);
      terms[t] = make_const(*k & mask(w), w);
    } else {
      terms[t] = make_var(vars.terms[t], w);
      base.inputs.emplace_back(vars.terms[t], w);
    }
  }
  std::vector<ExprPtr> tail;
  for (std::size_t i = 0; i < tail_widths.size(); ++i) {
    std::string name = "tail" + std::to_string(i);
    tail.push_back(make_var(name, tail_widths[i]));
    base.inputs.emplace_back(name, tail_widths[i]);
  }
  RuleInstance inst{base, base};
  inst.lhs.outputs.emplace_back("y", build_expr(rule.lhs, rule.lhs.root, s, terms, tail));
  inst.rhs.outputs.emplace_back("y", build_expr(rule.rhs, rule.rhs.root, s, terms, tail));
  return inst;
}

RuleCheckReport check_rule_soundness(const RewriteRule &rule, Width max_width,
                                     unsigned input_bit_budget, std::uint64_t seed) {
  if (max_width < 1) throw Error("check_rule_soundness: max_width must be >= 1");
  const auto &vars = *rule.vars;
  RuleCheckReport rep;
  rep.rule = rule.name;

  std::vector<int> wvars = rule.lhs_width_vars();
  std::vector<int> const_terms;
  for (const PatNode &n : rule.lhs.nodes)
    if (n.kind == PatNode::Kind::ConstTerm &&
        std::find(const_terms.begin(), const_terms.end(), n.term) == const_terms.end())
      const_terms.push_back(n.term);

  std::vector<std::size_t> tail_lengths{0};
  if (has_variadic(rule.lhs)) tail_lengths = {3, 4};  // SUM takes at least three

  std::set<std::string> minimality_seen;
  auto widths_of = [&](const Substitution &s) {
    std::map<std::string, Width> m;
    for (std::size_t i = 0; i < vars.widths.size(); ++i)
      if (s.widths[i]) m[vars.widths[i]] = s.widths[i];
    return m;
  };

  for (std::size_t tail_len : tail_lengths) {
    const std::size_t dims = wvars.size() + tail_len;
    std::vector<Width> odo(dims, 1);
    while (true) {
      Substitution s(vars.terms.size(), vars.widths.size());
      for (std::size_t i = 0; i < wvars.size(); ++i)
        s.widths[static_cast<std::size_t>(wvars[i])] = odo[i];
      std::vector<Width> tail_w(odo.begin() + static_cast<long>(wvars.size()), odo.end());
      s.tail_widths = tail_w;
      s.tail_consts.assign(tail_w.size(), std::nullopt);

      auto full = synthesize_free_widths(rule, s);
      if (!full) {
        ++rep.vacuous;
      } else {
        // enumerate the values of constant-matched terms
        std::vector<Width> cw;
        bool ok_widths = true;
        for (int t : const_terms) {
          long long w = eval_width(find_term_node(rule.lhs, t)->width, *full);
          if (w < 1 || w > 16) ok_widths = false;
          cw.push_back(static_cast<Width>(std::max(1LL, w)));
        }
        std::vector<Value> cval(const_terms.size(), 0);
        while (ok_widths) {
          Substitution cs = *full;
          for (std::size_t i = 0; i < const_terms.size(); ++i)
            cs.consts[static_cast<std::size_t>(const_terms[i])] = cval[i];
          ++rep.assignments_tried;
          if (rule.condition(Bindings(vars, cs))) {
            ++rep.assignments_passing;
            for (const auto &ws : rule.synth) {
              int var = vars.width(ws.var);
              Substitution dec = cs;
              if (dec.widths[static_cast<std::size_t>(var)] <= 1) continue;
              --dec.widths[static_cast<std::size_t>(var)];
              if (rule.condition(Bindings(vars, dec))) {
                std::string msg = ws.var + " = " + ws.formula + " is not minimal";
                for (const auto &[k, w] : widths_of(cs)) msg += " " + k + "=" + std::to_string(w);
                if (minimality_seen.insert(msg).second && rep.minimality_failures.size() < 50)
                  rep.minimality_failures.push_back(msg);
              }
            }
            try {
              RuleInstance inst = instantiate_rule(rule, cs, tail_w);
              EquivVerdict v = inst.lhs.total_input_bits() <= input_bit_budget
                                   ? equiv_exhaustive(inst.lhs, inst.rhs)
                                   : equiv_sampled(inst.lhs, inst.rhs, 10000, seed);
              rep.cases_checked += v.cases_checked;
              if (!v.equivalent() && rep.failures.size() < 100) {
                RuleFailure f{widths_of(cs), {}, *v.counterexample, v.lhs_value, v.rhs_value, ""};
                for (std::size_t i = 0; i < const_terms.size(); ++i)
                  f.constants[vars.terms[static_cast<std::size_t>(const_terms[i])]] = cval[i];
                rep.failures.push_back(std::move(f));
              }
            } catch (const WidthError &e) {
              // the lhs itself is ill-formed here (e.g. a compound width
              // beyond 64); nothing to check
              --rep.assignments_passing;
              ++rep.vacuous;
            }
          }
          std::size_t i = 0;
          for (; i < cval.size(); ++i) {
            if (++cval[i] <= mask(cw[i])) break;
            cval[i] = 0;
          }
          if (i == cval.size()) break;
        }
      }

      std::size_t i = 0;
      for (; i < dims; ++i) {
        if (++odo[i] <= max_width) break;
        odo[i] = 1;
      }
      if (i == dims) break;
    }
  }
  return rep;
}

RewriteRule corrupted_distribute_rule() {
  RewriteRule r = find_rule("Distribute Mult over Add");
  r.name = "Distribute Mult over Add (condition removed)";
  r.condition_text = "true";
  r.condition = [](const Bindings &) { return true; };
  return r;
}

nlohmann::json to_json(const EquivVerdict &v) {
  nlohmann::json j;
  j["status"] = verdict_status_name(v.status);
  j["mode"] = verdict_mode_name(v.mode);
  j["cases_checked"] = v.cases_checked;
  if (v.counterexample) {
    j["counterexample"] = *v.counterexample;
    j["output"] = v.output;
    j["original_value"] = v.lhs_value;
    j["optimized_value"] = v.rhs_value;
  }
  return j;
}

nlohmann::json to_json(const RuleCheckReport &r) {
  nlohmann::json j;
  j["rule"] = r.rule;
  j["assignments_tried"] = r.assignments_tried;
  j["assignments_passing"] = r.assignments_passing;
  j["vacuous"] = r.vacuous;
  j["cases_checked"] = r.cases_checked;
  j["ok"] = r.ok();
  j["failures"] = nlohmann::json::array();
  for (const auto &f : r.failures)
    j["failures"].push_back({{"widths", f.widths},
                             {"constants", f.constants},
                             {"inputs", f.inputs},
                             {"lhs", f.lhs},
                             {"rhs", f.rhs}});
  j["minimality_failures"] = r.minimality_failures;
  return j;
}

}  // namespace dpopt
