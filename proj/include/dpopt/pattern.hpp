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
#include <string>
#include <utility>
#include <vector>

#include "dpopt/egraph.hpp"

namespace dpopt {

/// Width expression `var + var2 + offset`; unused vars are -1.
struct WidthTerm {
  int var = -1;
  int var2 = -1;
  int offset = 0;

  bool is_literal() const { return var < 0 && var2 < 0; }
  bool is_simple_var() const { return var >= 0 && var2 < 0 && offset == 0; }
};

struct Substitution;
using ConstFn = std::function<Value(const Substitution &)>;

struct PatNode {
  enum class Kind {
    Op,         // operator with width and children
    Term,       // any class, bound to a term variable
    ConstLit,   // any class folding to `literal`, whatever its width
    ConstTerm,  // any class with a folded constant, bound to a term variable
    ConstFn,    // rhs only: constant computed from the substitution
  };
  Kind kind = Kind::Op;
  Op op = Op::Add;
  WidthTerm width;
  std::vector<int> children;
  int term = -1;
  Value literal = 0;
  ConstFn fn;
  /// SUM whose trailing operands bind to the substitution's tail list.
  bool variadic = false;
};

struct Pattern {
  std::vector<PatNode> nodes;
  int root = -1;
  const PatNode &at(int i) const { return nodes[static_cast<std::size_t>(i)]; }
};

/// Bindings for term variables, width variables and folded constants.
struct Substitution {
  std::vector<ClassId> terms;
  std::vector<Width> widths;  // 0 = unbound
  std::vector<std::optional<Value>> consts;
  std::vector<ClassId> tail;
  std::vector<Width> tail_widths;
  std::vector<std::optional<Value>> tail_consts;

  Substitution() = default;
  Substitution(std::size_t n_terms, std::size_t n_widths)
      : terms(n_terms, kNoClass), widths(n_widths, 0), consts(n_terms) {}

  Width w(int var) const { return widths[static_cast<std::size_t>(var)]; }
  std::optional<Value> c(int term) const { return consts[static_cast<std::size_t>(term)]; }
};

/// Value of a width term under `s`; returns a negative number if any
/// variable is unbound.
long long eval_width(const WidthTerm &t, const Substitution &s);

/// Names of the variables a rule's patterns refer to.
struct PatternVars {
  std::vector<std::string> terms;
  std::vector<std::string> widths;
  int term(const std::string &name) const;
  int width(const std::string &name) const;
};

/// Parses the textual pattern notation used by the rule catalog:
///   (OP W child...)   W is a width name, integer, `a+b`, or `a-1`
///   ?x:W              term variable of width W
///   ?x#:W             term variable that must be a folded constant
///   (const V W)       constant literal (any width on the left-hand side)
///   (const @f W)      constant computed by named function `f`
///   (sum W ?a ...)    `...` binds the remaining SUM operands
Pattern parse_pattern(const std::string &text, PatternVars &vars,
                      const std::vector<std::pair<std::string, ConstFn>> &fns = {});

struct Match {
  Substitution subst;
  ClassId eclass;
};

/// Every substitution under which `p` is represented in some class.
std::vector<Match> ematch(const EGraph &g, const Pattern &p,
                          std::size_t n_terms, std::size_t n_widths);
/// Matches rooted at one class only.
std::vector<Match> ematch_class(const EGraph &g, const Pattern &p, ClassId c,
                                std::size_t n_terms, std::size_t n_widths);

}  // namespace dpopt
