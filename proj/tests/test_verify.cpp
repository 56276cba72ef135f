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

#include "dpopt/verify.hpp"

using namespace dpopt;

namespace {

Design d(const char *text) { return parse_design(text); }

}  // namespace

TEST_SUITE("verify") {

TEST_CASE("exhaustive check of an identity") {
  Design a = d("(design (inputs (x 6) (y 5)) (outputs (o (+ 7 (var x 6) (var y 5)))))");
  Design b = d("(design (inputs (x 6) (y 5)) (outputs (o (+ 7 (var y 5) (var x 6)))))");
  EquivVerdict v = equiv_exhaustive(a, b);
  CHECK(v.equivalent());
  CHECK(v.mode == EquivVerdict::Mode::Exhaustive);
  CHECK(v.cases_checked == (1u << 11));
}

TEST_CASE("counterexample really separates the designs") {
  // differ only when x = 37
  Design a = d("(design (inputs (x 6)) (outputs (o (var x 6))))");
  Design b = d(R"((design (inputs (x 6))
    (outputs (o (mux 6 (< 1 (const 36 6) (var x 6)) (mux 6 (< 1 (var x 6) (const 38 6)) (const 0 6) (var x 6)) (var x 6))))))");
  EquivVerdict v = equiv_exhaustive(a, b);
  REQUIRE(v.status == EquivVerdict::Status::Counterexample);
  REQUIRE(v.counterexample.has_value());
  CHECK(v.counterexample->at("x") == 37);
  CHECK(eval_design(a, *v.counterexample).at("o") == v.lhs_value);
  CHECK(eval_design(b, *v.counterexample).at("o") == v.rhs_value);
  CHECK(v.lhs_value != v.rhs_value);
}

TEST_CASE("outputs are matched by name") {
  Design a = d("(design (inputs (x 4)) (outputs (p (var x 4)) (q (~ 4 (var x 4)))))");
  Design b = d("(design (inputs (x 4)) (outputs (q (~ 4 (var x 4))) (p (var x 4))))");
  CHECK(equiv_exhaustive(a, b).equivalent());
}

TEST_CASE("interface mismatch is an error") {
  Design a = d("(design (inputs (x 4)) (outputs (p (var x 4))))");
  Design b = d("(design (inputs (x 5)) (outputs (p (var x 5))))");
  Design c = d("(design (inputs (x 4)) (outputs (r (var x 4))))");
  CHECK_THROWS(equiv_exhaustive(a, b));
  CHECK_THROWS(equiv_exhaustive(a, c));
}

TEST_CASE("exhaustive refuses wide inputs") {
  Design a = d("(design (inputs (x 21)) (outputs (p (var x 21))))");
  CHECK_THROWS(equiv_exhaustive(a, a));
  CHECK(equiv_sampled(a, a, 100, 1).equivalent());
}

TEST_CASE("sampling starts from the corners") {
  // differs only when the top bit alone is set
  Design a = d("(design (inputs (x 40)) (outputs (p (var x 40))))");
  Design b = d(R"((design (inputs (x 40))
    (outputs (p (mux 40 (> 1 (var x 40) (const 549755813887 40))
                       (mux 40 (< 1 (var x 40) (const 549755813889 40)) (const 0 40) (var x 40))
                       (var x 40))))))");
  EquivVerdict v = equiv_sampled(a, b, 0, 1);
  CHECK(v.status == EquivVerdict::Status::Counterexample);
  CHECK(v.mode == EquivVerdict::Mode::Sampled);
  CHECK(v.counterexample->at("x") == (Value{1} << 39));
}

TEST_CASE("sampled verdicts are reproducible") {
  Design a = d("(design (inputs (x 32) (y 32)) (outputs (p (* 64 (var x 32) (var y 32)))))");
  Design b = d("(design (inputs (x 32) (y 32)) (outputs (p (* 64 (var y 32) (var x 32)))))");
  EquivVerdict v1 = equiv_sampled(a, b, 5000, 42);
  EquivVerdict v2 = equiv_sampled(a, b, 5000, 42);
  CHECK(v1.equivalent());
  CHECK(v1.cases_checked == v2.cases_checked);
  CHECK(v1.cases_checked > 5000);  // corners come first
}

TEST_CASE("rule report serializes") {
  RuleCheckReport r = check_rule_soundness(corrupted_distribute_rule(), 2, 12);
  auto j = to_json(r);
  CHECK(j["rule"] == r.rule);
  CHECK(j["failures"].size() == r.failures.size());
  CHECK_FALSE(r.ok());
}

}
