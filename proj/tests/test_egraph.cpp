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

#include "dpopt/egraph.hpp"
#include "dpopt/pattern.hpp"

using namespace dpopt;

namespace {

ENode var(const std::string &n, Width w) { return ENode{Op::Var, w, {}, 0, n}; }
ENode cst(Value v, Width w) { return ENode{Op::Const, w, {}, v, {}}; }
ENode op(Op o, Width w, std::vector<ClassId> kids) { return ENode{o, w, std::move(kids), 0, {}}; }

}  // namespace

TEST_SUITE("egraph") {

TEST_CASE("hash-consing returns the existing class") {
  EGraph g;
  ClassId x = g.add(var("x", 8));
  ClassId a = g.add(op(Op::Add, 9, {x, x}));
  ClassId b = g.add(op(Op::Add, 9, {x, x}));
  CHECK(a == b);
  CHECK(g.node_count() == 2);
  CHECK(g.class_count() == 2);
}

TEST_CASE("merge keeps the smaller id as the root") {
  EGraph g;
  ClassId x = g.add(var("x", 8));
  ClassId y = g.add(var("y", 8));
  CHECK(g.merge(y, x) == x);
  CHECK(g.find(y) == x);
}

TEST_CASE("rebuild restores congruence") {
  EGraph g;
  ClassId x = g.add(var("x", 8));
  ClassId y = g.add(var("y", 8));
  ClassId fx = g.add(op(Op::Not, 8, {x}));
  ClassId fy = g.add(op(Op::Not, 8, {y}));
  CHECK(g.find(fx) != g.find(fy));
  g.merge(x, y);
  g.rebuild();
  CHECK(g.find(fx) == g.find(fy));
  CHECK(g.clean());
}

TEST_CASE("constant folding adds a CONST node to the class") {
  EGraph g;
  ClassId a = g.add(cst(3, 2));
  ClassId b = g.add(cst(5, 3));
  ClassId s = g.add(op(Op::Add, 3, {a, b}));
  g.rebuild();
  REQUIRE(g.constant(s).has_value());
  CHECK(*g.constant(s) == 0);  // 8 truncated to 3 bits
  bool has_const = false;
  for (const ENode &n : g.eclass(s).nodes) has_const |= n.op == Op::Const;
  CHECK(has_const);
}

TEST_CASE("merging classes of different widths is a conflict") {
  EGraph g;
  ClassId x = g.add(var("x", 8));
  ClassId y = g.add(var("y", 9));
  CHECK_THROWS_AS(
      {
        g.merge(x, y);
        g.rebuild();
      },
      AnalysisConflict);
}

TEST_CASE("merging classes with different constants is a conflict") {
  EGraph g;
  ClassId a = g.add(cst(1, 4));
  ClassId b = g.add(cst(2, 4));
  CHECK_THROWS_AS(
      {
        g.merge(a, b);
        g.rebuild();
      },
      AnalysisConflict);
}

TEST_CASE("node budget") {
  EGraph g(3);
  ClassId x = g.add(var("x", 8));
  g.add(op(Op::Not, 8, {x}));
  g.add(op(Op::Neg, 8, {x}));
  CHECK_THROWS_AS(g.add(op(Op::Add, 8, {x, x})), NodeLimitError);
  CHECK(g.node_count() == 3);
}

TEST_CASE("version changes only on new nodes and effective unions") {
  EGraph g;
  ClassId x = g.add(var("x", 8));
  ClassId y = g.add(var("y", 8));
  auto v = g.version();
  g.add(var("x", 8));
  CHECK(g.version() == v);
  g.merge(x, y);
  CHECK(g.version() != v);
  v = g.version();
  g.merge(x, y);
  CHECK(g.version() == v);
}

TEST_CASE("add_expr shares repeated subterms") {
  EGraph g;
  Design d = parse_design(
      "(design (inputs (x 4)) (let (t (+ 5 (var x 4) (const 1 1)))) (outputs (y (* 10 t t))))");
  ClassId r = g.add_expr(d.outputs[0].second);
  CHECK(g.class_count() == 4);
  CHECK(g.width(r) == 10);
}

TEST_CASE("pattern matching binds terms and widths") {
  EGraph g;
  ClassId x = g.add(var("x", 8));
  ClassId y = g.add(var("y", 6));
  ClassId s = g.add(op(Op::Add, 9, {x, y}));
  PatternVars vars;
  Pattern p = parse_pattern("(+ r ?a:p ?b:q)", vars);
  auto ms = ematch(g, p, vars.terms.size(), vars.widths.size());
  REQUIRE(ms.size() == 1);
  const Substitution &m = ms[0].subst;
  CHECK(ms[0].eclass == s);
  CHECK(m.terms[vars.term("a")] == x);
  CHECK(m.terms[vars.term("b")] == y);
  CHECK(m.w(vars.width("r")) == 9);
  CHECK(m.w(vars.width("p")) == 8);
  CHECK(m.w(vars.width("q")) == 6);
}

TEST_CASE("repeated term variables must bind the same class") {
  EGraph g;
  ClassId x = g.add(var("x", 8));
  ClassId y = g.add(var("y", 8));
  g.add(op(Op::Add, 9, {x, y}));
  ClassId xx = g.add(op(Op::Add, 9, {x, x}));
  PatternVars vars;
  Pattern p = parse_pattern("(+ q ?a:p ?a:p)", vars);
  auto ms = ematch(g, p, vars.terms.size(), vars.widths.size());
  REQUIRE(ms.size() == 1);
  CHECK(ms[0].eclass == xx);
}

TEST_CASE("constant literal matches any class folding to the value") {
  EGraph g;
  ClassId x = g.add(var("x", 8));
  ClassId one = g.add(cst(1, 3));
  ClassId sum = g.add(op(Op::Add, 3, {one, g.add(cst(0, 1))}));
  g.rebuild();
  CHECK(g.find(sum) == g.find(one));
  g.add(op(Op::Mul, 8, {one, x}));
  PatternVars vars;
  Pattern p = parse_pattern("(* p (const 1 1) ?x:p)", vars);
  CHECK(ematch(g, p, vars.terms.size(), vars.widths.size()).size() == 1);
}

TEST_CASE("width arithmetic in patterns") {
  EGraph g;
  ClassId a = g.add(var("a", 3));
  ClassId b = g.add(var("b", 4));
  g.add(op(Op::Concat, 7, {a, b}));
  g.add(op(Op::Concat, 6, {a, b}));
  PatternVars vars;
  Pattern p = parse_pattern("(concat q+s ?a:q ?b:s)", vars);
  CHECK(ematch(g, p, vars.terms.size(), vars.widths.size()).size() == 1);
}

TEST_CASE("variadic sum binds its tail") {
  EGraph g;
  ClassId a = g.add(var("a", 4));
  ClassId b = g.add(var("b", 5));
  ClassId c = g.add(var("c", 6));
  g.add(op(Op::Sum, 8, {a, b, c}));
  PatternVars vars;
  Pattern p = parse_pattern("(sum q ?a:p ...)", vars);
  auto ms = ematch(g, p, vars.terms.size(), vars.widths.size());
  REQUIRE(ms.size() == 1);
  CHECK(ms[0].subst.tail.size() == 2);
  CHECK(ms[0].subst.tail_widths == std::vector<Width>{5, 6});
}

}
