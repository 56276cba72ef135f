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

#include "dpopt/cost.hpp"

using namespace dpopt;

namespace {

const CostConfig kDefault;

double cost(Op op, Width out, std::vector<Operand> in, const CostConfig &cfg = kDefault) {
  return op_cost(NodeCostQuery{op, out, std::move(in)}, cfg);
}

Operand v(Width w) { return Operand{w, std::nullopt}; }
Operand k(Value c, Width w) { return Operand{w, c}; }

// Fewest digits from {-1, 0, 1} that represent n, by direct recursion on the
// lowest digit.
int min_signed_digits(std::uint64_t n, std::map<std::uint64_t, int> &memo) {
  if (n <= 1) return static_cast<int>(n);
  if (auto it = memo.find(n); it != memo.end()) return it->second;
  int r;
  if (n % 2 == 0)
    r = min_signed_digits(n / 2, memo);
  else
    r = 1 + std::min(min_signed_digits((n - 1) / 2, memo), min_signed_digits((n + 1) / 2, memo));
  memo[n] = r;
  return r;
}

}  // namespace

TEST_SUITE("cost") {

TEST_CASE("worked values") {
  CHECK(cost(Op::Add, 8, {v(8), v(8)}) == doctest::Approx(48));
  CHECK(cost(Op::Mul, 11, {k(7, 3), v(8)}) == doctest::Approx(77));
  CHECK(cost(Op::Sum, 10, {v(8), v(8), v(8)}) == doctest::Approx(110));
  // two chained adds at the same widths: 9 bits (PA 63) then 10 bits (PA 70)
  double chained = cost(Op::Add, 9, {v(8), v(8)}) + cost(Op::Add, 10, {v(9), v(8)});
  CHECK(chained == doctest::Approx(133));
  CHECK(cost(Op::LShift, 40, {v(32), k(3, 2)}) == 0);
}

TEST_CASE("csd digit count") {
  std::map<std::uint64_t, int> memo;
  for (std::uint64_t n = 0; n < (1u << 14); ++n) {
    INFO(n);
    CHECK(csd_digits(n) == min_signed_digits(n, memo));
  }
  CHECK(csd_digits(7) == 2);
  CHECK(csd_digits(21) == 3);
  CHECK(csd_digits(~Value{0}) == 2);  // 2^64 - 1
}

TEST_CASE("zero-cost operators") {
  CHECK(cost(Op::Var, 8, {}) == 0);
  CHECK(cost(Op::Const, 8, {}) == 0);
  CHECK(cost(Op::Concat, 16, {v(8), v(8)}) == 0);
  CHECK(cost(Op::RShift, 8, {v(16), k(5, 3)}) == 0);
  CHECK(cost(Op::Mul, 16, {v(8), k(8, 4)}) == 0);
  CHECK(cost(Op::Mul, 16, {k(1, 1), v(8)}) == 0);
  CHECK(cost(Op::Mul, 16, {k(0, 1), v(8)}) == 0);
  CHECK(cost(Op::Mul, 16, {v(8), k(3, 2)}) > 0);
  CHECK(cost(Op::LShift, 16, {v(8), v(3)}) > 0);
  CHECK(cost(Op::Add, 2, {v(1), v(1)}) > 0);
}

TEST_CASE("monotone in the output width") {
  std::mt19937_64 rng(11);
  const Op ops[] = {Op::Add, Op::Sub, Op::Mul, Op::LShift, Op::RShift, Op::Mux, Op::Not,
                    Op::Neg, Op::Sum, Op::Fma, Op::Muxar, Op::Lt};
  for (Op op : ops)
    for (int t = 0; t < 50; ++t) {
      std::size_t n = op == Op::Sum ? 4 : static_cast<std::size_t>(op_arity(op));
      std::vector<Operand> in;
      for (std::size_t i = 0; i < n; ++i) {
        Width w = 1 + static_cast<Width>(rng() % 24);
        if (op == Op::Mux && i == 0) w = 1;
        in.push_back(rng() % 4 == 0 && op != Op::Mux ? k(rng() & mask(w), w) : v(w));
      }
      double prev = 0;
      for (Width out = 1; out <= 64; ++out) {
        double c = cost(op, out, in);
        INFO(op_name(op), " out=", out);
        CHECK(c >= prev - 1e-9);
        prev = c;
      }
    }
}

TEST_CASE("merging pays") {
  for (Width w = 4; w <= 60; ++w) {
    double sum = cost(Op::Sum, w + 2, {v(w), v(w), v(w)});
    double two = cost(Op::Add, w + 1, {v(w), v(w)}) + cost(Op::Add, w + 2, {v(w + 1), v(w)});
    CHECK(sum < two);
  }
  for (Width p = 1; p <= 16; ++p)
    for (Width q = 1; q <= 16; ++q)
      for (Width c = 1; c <= 32; c += 3)
        for (Width t = 3; t <= 40; ++t) {
          Width s = std::min<Width>(t, p + q);
          double fma = cost(Op::Fma, t, {v(p), v(q), v(c)});
          double split = cost(Op::Mul, s, {v(p), v(q)}) + cost(Op::Add, t, {v(s), v(c)});
          INFO(p, " ", q, " ", c, " ", t);
          CHECK(fma < split);
        }
  // at the widths where the merge rewrite produces a MUXAR: t > s >= q + r
  for (Width r = 2; r <= 12; ++r)
    for (Width q = 2; q <= 16; ++q)
      for (Width t = q + r + 1; t <= 48; ++t) {
        Width s = q + r;
        double muxar = cost(Op::Muxar, t, {v(r), v(q), v(q)});
        double split = 2 * cost(Op::Mul, s, {v(q), v(r)}) + cost(Op::Add, t, {v(s), v(s)});
        INFO(r, " ", q, " ", t);
        CHECK(muxar < split);
      }
}

TEST_CASE("a constant operand never costs more") {
  std::mt19937_64 rng(5);
  const Op ops[] = {Op::Add, Op::Sub, Op::Mul, Op::Lt, Op::Gt};
  for (Op op : ops)
    for (int t = 0; t < 300; ++t) {
      Width a = 2 + rng() % 20, b = 2 + rng() % 20, out = 2 + rng() % 40;
      Value c = rng() & mask(b);
      double plain = cost(op, out, {v(a), v(b)});
      double with_const = cost(op, out, {v(a), k(c, b)});
      CHECK(with_const <= plain);
      if (op == Op::Add) CHECK(with_const < plain);
      // a dense constant falls back to the Booth array and ties
      if (op == Op::Mul && csd_digits(c) <= 2) CHECK(with_const < plain);
    }
}

TEST_CASE("config text round trip") {
  CostConfig c;
  c.pa_base = 2.5;
  c.mux_gate = 7;
  CostConfig back = CostConfig::from_text(c.to_text());
  CHECK(back == c);
  CHECK(CostConfig::from_text("# nothing\n\n  pa_log = 2 # trailing\n").pa_log == 2);
  CHECK_THROWS_AS(CostConfig::from_text("frobnicate = 1"), Error);
  CHECK_THROWS_AS(CostConfig::from_text("pa_base = -1"), Error);
  CHECK_THROWS_AS(CostConfig::from_text("pa_base = 1x"), Error);
  CHECK_THROWS_AS(CostConfig::from_text("pa_base 1"), Error);
}

TEST_CASE("scaling multiplies every cost") {
  std::mt19937_64 rng(9);
  CostConfig big = kDefault.scaled(3.25);
  CHECK(big.const_discount == kDefault.const_discount);
  for (int t = 0; t < 200; ++t) {
    Width a = 1 + rng() % 30, b = 1 + rng() % 30, out = 1 + rng() % 60;
    for (Op op : {Op::Add, Op::Mul, Op::Sub, Op::LShift}) {
      std::vector<Operand> in{v(a), t % 2 ? k(rng() & mask(b), b) : v(b)};
      CHECK(cost(op, out, in, big) == doctest::Approx(3.25 * cost(op, out, in)));
    }
  }
}

TEST_CASE("design cost counts shared nodes once") {
  Design d = parse_design(R"((design (inputs (x 8))
    (let (t (+ 9 (var x 8) (var x 8))))
    (outputs (a t) (b t))))");
  CHECK(design_cost(d, kDefault) == doctest::Approx(cost(Op::Add, 9, {v(8), v(8)})));
  std::vector<NodeCostQuery> none;
  CHECK(dag_cost(none, kDefault) == 0);
}

}
