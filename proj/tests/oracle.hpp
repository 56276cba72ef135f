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

// Reference semantics for tests, written directly from the operator
// definitions on 128-bit integers. Operands of tests stay narrow enough
// (products of two 64-bit values at most) that nothing here wraps before the
// final truncation.
#pragma once

#include <span>

#include "dpopt/ir.hpp"

namespace oracle {

using U = unsigned __int128;

inline U trunc(U v, dpopt::Width w) { return w >= 128 ? v : v & ((U{1} << w) - 1); }
inline U shl(U v, U s) { return s >= 128 ? 0 : v << s; }
inline U shr(U v, U s) { return s >= 128 ? 0 : v >> s; }

inline dpopt::Value apply(dpopt::Op op, dpopt::Width out, std::span<const dpopt::Value> a,
                          std::span<const dpopt::Width> w) {
  using dpopt::Op;
  U r = 0;
  switch (op) {
    case Op::LShift: r = shl(a[0], a[1]); break;
    case Op::RShift: r = shr(a[0], a[1]); break;
    case Op::Add: r = U(a[0]) + a[1]; break;
    // a - b computed as a + (2^128 - b): its low bits are the modular difference
    case Op::Sub: r = U(a[0]) + (~U(a[1]) + 1); break;
    case Op::Neg: r = ~U(a[0]) + 1; break;
    case Op::Mul: r = U(a[0]) * a[1]; break;
    case Op::Mux: r = a[0] ? a[1] : a[2]; break;
    case Op::Not: r = trunc(~U(a[0]), w[0]); break;
    case Op::Concat: r = shl(a[0], w[1]) + a[1]; break;
    case Op::Lt: r = a[0] < a[1]; break;
    case Op::Gt: r = a[0] > a[1]; break;
    case Op::Sum:
      for (dpopt::Value v : a) r += v;
      break;
    case Op::Fma: r = U(a[0]) * a[1] + a[2]; break;
    case Op::Muxar:
      for (dpopt::Width i = 0; i < w[0]; ++i) r += U((a[0] >> i) & 1 ? a[1] : a[2]) << i;
      break;
    default: break;
  }
  return static_cast<dpopt::Value>(trunc(r, out));
}

}  // namespace oracle
