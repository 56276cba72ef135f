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

#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "dpopt/egraph.hpp"
#include "dpopt/pattern.hpp"

namespace dpopt {

enum class RuleClass { Arith, Logic, ConstExpansion, ArithLogicExchange, Merging };

std::string_view rule_class_name(RuleClass c);
std::optional<RuleClass> rule_class_from_name(std::string_view name);
std::set<RuleClass> all_rule_classes();
/// Everything except constant expansion.
std::set<RuleClass> default_rule_classes();

/// Named access to substitution values inside conditions.
class Bindings {
 public:
  Bindings(const PatternVars &vars, const Substitution &s) : vars_(vars), s_(s) {}
  /// Width variable value; 0 if unbound.
  long long operator()(const char *width_var) const;
  /// Folded constant of a term variable.
  std::optional<Value> k(const char *term) const;
  const Substitution &subst() const { return s_; }

 private:
  const PatternVars &vars_;
  const Substitution &s_;
};

using Condition = std::function<bool(const Bindings &)>;

/// Closed-form minimal value for a width that appears only on the rhs.
struct WidthSynth {
  std::string var;
  std::string formula;
  std::function<long long(const Bindings &)> fn;
};

struct RewriteRule {
  std::string name;  // unique, e.g. "Commutativity (+)"
  std::string row;   // operator-table row the rule belongs to
  RuleClass rule_class = RuleClass::Arith;
  bool supplementary = false;
  std::string lhs_text;
  std::string rhs_text;
  std::string condition_text;
  std::shared_ptr<PatternVars> vars;
  Pattern lhs;
  Pattern rhs;
  Condition condition;
  std::vector<WidthSynth> synth;

  std::size_t n_terms() const { return vars->terms.size(); }
  std::size_t n_widths() const { return vars->widths.size(); }
  /// Width variables bound by the left-hand side.
  std::vector<int> lhs_width_vars() const;
};

/// Every rewrite of the catalog, one entry per concrete rule: the two
/// commutativity instances and the two-rule Merge Additions scheme included.
const std::vector<RewriteRule> &rule_table();
/// Extra rules outside the table (currently the shift-cancel identity).
const std::vector<RewriteRule> &supplementary_rules();
/// Table rules plus supplementary rules restricted to `classes`.
std::vector<RewriteRule> select_rules(const std::set<RuleClass> &classes);
const RewriteRule &find_rule(const std::string &name);

/// Extends `s` with the minimal value of every free width. Returns nullopt
/// when a synthesized width falls outside [1, 64].
std::optional<Substitution> synthesize_free_widths(const RewriteRule &rule,
                                                   Substitution s);

/// Evaluates the rule's sufficient condition. Constant predicates read the
/// class analysis of `g`; free widths are synthesized when unbound.
bool check_condition(const RewriteRule &rule, const Substitution &s, const EGraph &g);
/// Same, on a substitution that already carries every width and constant.
bool check_condition(const RewriteRule &rule, const Substitution &s);

/// Adds the rule's right-hand side under the complete substitution `s` and
/// returns its class (to be merged with the matched class).
ClassId instantiate_rhs(const RewriteRule &rule, const Substitution &s, EGraph &g);

RunReport run_saturation(EGraph &g, const std::vector<RewriteRule> &rules,
                         const RunLimits &limits);

}  // namespace dpopt
