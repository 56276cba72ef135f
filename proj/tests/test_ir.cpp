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

#include <random>

#include "dpopt/ir.hpp"
#include "oracle.hpp"

using namespace dpopt;

TEST_SUITE("ir") {

TEST_CASE("apply_op agrees with the wide-integer oracle") {
  std::mt19937_64 rng(7);
  const Op ops[] = {Op::LShift, Op::RShift, Op::Add, Op::Sub, Op::Neg, Op::Mul,  Op::Mux,
                    Op::Not,    Op::Concat, Op::Lt,  Op::Gt,  Op::Sum, Op::Muxar, Op::Fma};
  for (Op op : ops) {
    for (int trial = 0; trial < 400; ++trial) {
      std::size_t n = op == Op::Sum ? 3 + rng() % 3 : static_cast<std::size_t>(op_arity(op));
      std::vector<Width> w(n);
      std::vector<Value> v(n);
      for (std::size_t i = 0; i < n; ++i) {
        w[i] = 1 + static_cast<Width>(rng() % 32);
        if (op == Op::Mux && i == 0) w[i] = 1;
        if ((op == Op::LShift || op == Op::RShift) && i == 1) w[i] = 1 + rng() % 7;
        if (op == Op::Muxar && i == 0) w[i] = 1 + rng() % 8;
        v[i] = rng() & mask(w[i]);
      }
      Width out = 1 + static_cast<Width>(rng() % 64);
      if (op == Op::Lt || op == Op::Gt) out = 1;
      INFO(op_name(op), " out=", out);
      CHECK(apply_op(op, out, v, w) == oracle::apply(op, out, v, w));
    }
  }
}

TEST_CASE("truncation at the output width") {
  Value a[] = {0xff, 0x01};
  Width w[] = {8, 8};
  CHECK(apply_op(Op::Add, 8, a, w) == 0);
  CHECK(apply_op(Op::Add, 9, a, w) == 0x100);
  Value n[] = {1};
  Width nw[] = {4};
  CHECK(apply_op(Op::Neg, 4, n, nw) == 0xf);
  CHECK(apply_op(Op::Not, 8, n, nw) == 0xe);  // complement stays within the operand
}

TEST_CASE("shift amounts at and beyond 64 bits") {
  Value a[] = {1, 64};
  Width w[] = {1, 7};
  CHECK(apply_op(Op::LShift, 64, a, w) == 0);
  Value b[] = {~Value{0}, 63};
  Width bw[] = {64, 6};
  CHECK(apply_op(Op::RShift, 64, b, bw) == 1);
}

TEST_CASE("parse and print round trip") {
  const char *text = R"((design (inputs (x 8) (s 1))
    (let (t (+ 9 (var x 8) (const 1 1))))
    (outputs (y (mux 9 (var s 1) t (var x 8))) (z (* 18 t t)))))";
  Design d = parse_design(text);
  Design again = parse_design(print_design(d));
  CHECK(d == again);
  CHECK(print_design(d) == print_design(again));
  CHECK(d.total_input_bits() == 9);
}

TEST_CASE("parse errors carry a position") {
  CHECK_THROWS_AS(parse_design("(design (inputs (x 8)) (outputs (y (var q 8))))"), Error);
  CHECK_THROWS_AS(parse_design("(design (inputs (x 8)) (outputs (y (+ 8 (var x 8))))"), Error);
  CHECK_THROWS_AS(parse_design("(design (inputs (x 65)) (outputs (y (var x 65))))"), Error);
  CHECK_THROWS_AS(parse_design("(design (inputs (x 8)) (outputs (y (const 300 8))))"), Error);
  try {
    parse_design("(design\n (inputs (x 8))\n (outputs (y (frob 8 (var x 8)))))");
    FAIL("expected a parse error");
  } catch (const ParseError &e) {
    CHECK(e.line() == 3);
  }
}

TEST_CASE("mux select must be one bit") {
  auto x = make_var("x", 8);
  CHECK_THROWS_AS(make_op(Op::Mux, 8, {x, x, x}), WidthError);
}

TEST_CASE("sum needs at least three operands") {
  auto x = make_var("x", 8);
  CHECK_THROWS(make_op(Op::Sum, 8, {x, x}));
  CHECK_NOTHROW(make_op(Op::Sum, 8, {x, x, x}));
}

TEST_CASE("interner shares structurally equal subterms") {
  ExprInterner in;
  auto a = in.op(Op::Add, 9, {in.var("x", 8), in.constant(1, 1)});
  auto b = in.op(Op::Add, 9, {in.var("x", 8), in.constant(1, 1)});
  CHECK(a.get() == b.get());
  auto fresh = make_op(Op::Add, 9, {make_var("x", 8), make_const(1, 1)});
  CHECK(in.intern(fresh).get() == a.get());
  CHECK(structurally_equal(fresh, a));
}

TEST_CASE("compiled evaluation matches the tree evaluator") {
  Design d = parse_design(R"((design (inputs (a 6) (b 5) (s 1))
    (let (p (* 11 (var a 6) (var b 5))) (q (- 7 (var a 6) (var b 5))))
    (outputs (y (sum 12 p q (concat 11 (var b 5) (var a 6))))
             (z (muxar 10 (var b 5) (var a 6) (~ 6 (var a 6))))
             (c (< 1 p q)))))");
  CompiledDesign cd(d);
  std::mt19937_64 rng(3);
  std::vector<Value> in(3), out(3);
  for (int i = 0; i < 2000; ++i) {
    Env env{{"a", rng() & 63}, {"b", rng() & 31}, {"s", rng() & 1}};
    in = {env["a"], env["b"], env["s"]};
    cd.run(in, out);
    auto ref = eval_design(d, env);
    CHECK(out[0] == ref["y"]);
    CHECK(out[1] == ref["z"]);
    CHECK(out[2] == ref["c"]);
  }
}

TEST_CASE("netlist has one operation per line") {
  Design d = parse_design(
      "(design (inputs (x 8)) (outputs (y (+ 9 (<< 9 (var x 8) (const 1 1)) (var x 8)))))");
  std::string n = emit_netlist(d);
  CHECK(n.find("<<") != std::string::npos);
  CHECK(n.find("+") != std::string::npos);
}

}
