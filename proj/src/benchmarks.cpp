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

#include "dpopt/benchmarks.hpp"

#include <algorithm>

namespace dpopt {

namespace {

std::string w(unsigned v) { return std::to_string(std::min<unsigned>(v, kMaxWidth)); }

Design fig1() {
  return parse_design(R"((design (inputs (x 8))
  (outputs (y (>> 8 (* 9 (const 2 2) (var x 8)) (const 1 1))))))");
}

// (a * b) << S + c, the multiply and the add separated by a shift
Design shifted_fma() {
  return parse_design(R"((design (inputs (a 8) (b 8) (s 2) (c 16))
  (outputs (y (+ 20 (<< 19 (* 19 (var a 8) (var b 8)) (var s 2)) (var c 16))))))");
}

// Four-tap filter kernel: products Zi arrive as inputs, 2S and 3S are built
// from the shared shift amount the way a designer would write them.
Design fir4(Width p) {
  // Shift amount width. With a 2-bit shift the choice between absorbing z4
  // into the sum and keeping a final adder flips back and forth at the
  // ceil(log2) steps of the prefix-adder cost.
  const Width q = 1;
  const Width k = 3 * ((Width{1} << q) - 1);  // widest shift of z1 by 3s
  const std::string P = std::to_string(p), Q = std::to_string(q);
  auto z = [&](int i) { return "(var z" + std::to_string(i) + " " + P + ")"; };
  const std::string s = "(var s " + Q + ")";
  std::string text = "(design (inputs (z1 " + P + ") (z2 " + P + ") (z3 " + P + ") (z4 " + P +
                     ") (s " + Q + "))\n"
                     "  (let (s2 (+ " + w(q + 1) + " " + s + " " + s + "))\n"
                     "       (s3 (+ " + w(q + 2) + " s2 " + s + "))\n"
                     "       (a (+ " + w(p + k + 1) + " (<< " + w(p + k) + " " + z(1) + " s3) (<< " +
                     w(p + k) + " " + z(2) + " s2)))\n"
                     "       (b (+ " + w(p + k + 2) + " a " + z(3) + "))\n"
                     "       (c (>> " + w(p + k + 2) + " b " + s + ")))\n"
                     "  (outputs (y (+ " + w(p + k + 3) + " c " + z(4) + "))))";
  return parse_design(text);
}

// Eight-tap transposed-form filter: every tap multiplies the same sample x,
// so the constant products form a multiple-constant-multiplication block.
Design fir8(Width p) {
  const Value taps[] = {2, 3, 4, 5, 6, 7, 3, 5};
  const std::string P = std::to_string(p);
  const std::string prod = w(p + 3);
  const std::string acc = w(p + 4);
  std::string text = "(design (inputs (x " + P + ")";
  for (int i = 1; i < 8; ++i) text += " (r" + std::to_string(i) + " " + acc + ")";
  text += ")\n  (outputs";
  for (int i = 0; i < 8; ++i) {
    std::string term = "(* " + prod + " (const " + std::to_string(taps[i]) + " 3) (var x " + P + "))";
    if (i < 7) term = "(+ " + acc + " " + term + " (var r" + std::to_string(i + 1) + " " + acc + "))";
    text += "\n    (y" + std::to_string(i) + " " + term + ")";
  }
  text += "))";
  return parse_design(text);
}

Design muxarray_kernel() {
  return parse_design(R"((design (inputs (a 4) (b 4) (c 4))
  (outputs (y (+ 9 (* 8 (var a 4) (var b 4)) (* 8 (var c 4) (~ 4 (var b 4))))))))");
}

// Reconstructed decoder step: three conditional adds of the scaled step size.
Design adpcm_recon() {
  return parse_design(R"((design (inputs (step 16) (d2 1) (d1 1) (d0 1))
  (let (v0 (>> 18 (var step 16) (const 3 2)))
       (v1 (mux 18 (var d2 1) (+ 18 v0 (var step 16)) v0))
       (v2 (mux 18 (var d1 1) (+ 18 v1 (>> 18 (var step 16) (const 1 1))) v1))
       (v3 (mux 18 (var d0 1) (+ 18 v2 (>> 18 (var step 16) (const 2 2))) v2)))
  (outputs (y v3))))");
}

// (x+1)*(x+1) next to a second output reusing x+1: the shared adder is only
// visible to an extractor that prices the whole DAG.
Design shared_square() {
  return parse_design(R"((design (inputs (x 4))
  (let (t (+ 5 (var x 4) (const 1 1))))
  (outputs (sq (* 10 t t))
           (u (<< 4 t (const 1 1))))))");
}

}  // namespace

const std::vector<BenchmarkInfo> &benchmark_registry() {
  static const std::vector<BenchmarkInfo> reg = {
      {"fig1", "(2*x)>>1 on an 8-bit x; reduces to x", false, 0, false},
      {"shifted_fma", "(a*b)<<S + c; the shift hides a fused multiply-add", false, 0, false},
      {"mcm", "{3x, 7x, 21x} on an 8-bit x (constant expansion on)", false, 0, true},
      {"fir4", "4-tap filter kernel with a shared shift amount S (param: data width)", true, 16,
       false},
      {"fir8", "8-tap transposed filter, taps {2,3,4,5,6,7,3,5} (param: sample width)", true, 8,
       true},
      {"muxarray_kernel", "(a*b) + (c*~b): two arrays that merge into one", false, 0, false},
      {"adpcm_recon", "reconstructed 9-operator decoder step (not the original source)", false, 0,
       false},
      {"shared_square", "(x+1)*(x+1) with x+1 also feeding a truncated shift", false, 0, false},
  };
  return reg;
}

const BenchmarkInfo &benchmark_info(const std::string &name) {
  for (const auto &b : benchmark_registry())
    if (b.name == name) return b;
  throw Error("unknown benchmark '" + name + "'");
}

Design mcm_design(const std::vector<Value> &coeffs, Width x_width) {
  if (coeffs.empty()) throw Error("mcm: no coefficients");
  std::string X = "(var x " + std::to_string(x_width) + ")";
  std::string text = "(design (inputs (x " + std::to_string(x_width) + ")) (outputs";
  for (Value c : coeffs) {
    if (c == 0) throw Error("mcm: zero coefficient");
    Width cw = bits_for(c);
    text += " (y" + std::to_string(c) + " (* " + w(x_width + cw) + " (const " +
            std::to_string(c) + " " + std::to_string(cw) + ") " + X + "))";
  }
  text += "))";
  return parse_design(text);
}

Design benchmark(const std::string &name, std::optional<Width> param) {
  const BenchmarkInfo &info = benchmark_info(name);
  if (param && !info.parameterized)
    throw Error("benchmark '" + name + "' takes no width parameter");
  Width p = param.value_or(info.default_param);
  if (info.parameterized && (p < 1 || p > kMaxWidth))
    throw Error("benchmark parameter out of range [1, 64]");
  if (name == "fig1") return fig1();
  if (name == "shifted_fma") return shifted_fma();
  if (name == "mcm") return mcm_design({3, 7, 21});
  if (name == "fir4") return fir4(p);
  if (name == "fir8") return fir8(p);
  if (name == "muxarray_kernel") return muxarray_kernel();
  if (name == "adpcm_recon") return adpcm_recon();
  if (name == "shared_square") return shared_square();
  throw Error("unknown benchmark '" + name + "'");
}

}  // namespace dpopt
