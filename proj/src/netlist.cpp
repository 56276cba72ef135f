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

#include <algorithm>
#include <map>
#include <sstream>

#include "dpopt/ir.hpp"

namespace dpopt {

namespace {

std::string literal(Value v, Width w) {
  return std::to_string(w) + "'d" + std::to_string(v);
}

std::string range(Width w) { return "[" + std::to_string(w - 1) + ":0]"; }

class Emitter {
 public:
  std::string run(const Design &d) {
    for (const auto &[name, w] : d.inputs)
      os_ << "input " << name << range(w) << '\n';
    for (const Expr *n : topo_order(d)) {
      if (n->op == Op::Var || n->op == Op::Const) continue;
      emit(n);
    }
    for (const auto &[name, e] : d.outputs)
      os_ << name << " = " << ref(e.get()) << '\n';
    return os_.str();
  }

 private:
  std::string fresh(Width w, const std::string &rhs) {
    std::string name = "w" + std::to_string(next_++);
    os_ << name << range(w) << " = " << rhs << '\n';
    return name;
  }

  std::string ref(const Expr *n) const {
    if (n->op == Op::Var) return n->name;
    if (n->op == Op::Const) return literal(n->value, n->width);
    return wires_.at(n);
  }

  void emit(const Expr *n) {
    auto arg = [&](std::size_t i) { return ref(n->children[i].get()); };
    std::string rhs;
    switch (n->op) {
      case Op::Neg: rhs = "-" + arg(0); break;
      case Op::Not: rhs = "~" + arg(0); break;
      case Op::Mux: rhs = arg(0) + " ? " + arg(1) + " : " + arg(2); break;
      case Op::Concat: rhs = "{" + arg(0) + ", " + arg(1) + "}"; break;
      case Op::Sum:
        for (std::size_t i = 0; i < n->children.size(); ++i)
          rhs += (i ? " + " : "") + arg(i);
        break;
      case Op::Fma: rhs = arg(0) + " * " + arg(1) + " + " + arg(2); break;
      case Op::Muxar: {
        // one mux per select bit, then a weighted sum of the partial rows
        const Expr *sel = n->children[0].get();
        Width row = std::max(n->children[1]->width, n->children[2]->width);
        std::vector<std::string> rows;
        for (Width i = 0; i < sel->width; ++i) {
          std::string bit = sel->op == Op::Const
                                ? literal((sel->value >> i) & 1, 1)
                                : ref(sel) + "[" + std::to_string(i) + "]";
          rows.push_back(fresh(row, bit + " ? " + arg(1) + " : " + arg(2)));
        }
        for (std::size_t i = 0; i < rows.size(); ++i) {
          if (i) rhs += " + ";
          rhs += i ? "(" + rows[i] + " << " + std::to_string(i) + ")" : rows[i];
        }
        break;
      }
      default:
        rhs = arg(0) + " " + std::string(op_symbol(n->op)) + " " + arg(1);
        break;
    }
    wires_[n] = fresh(n->width, rhs);
  }

  std::ostringstream os_;
  std::map<const Expr *, std::string> wires_;
  int next_ = 0;
};

}  // namespace

std::string emit_netlist(const Design &d) { return Emitter().run(d); }

}  // namespace dpopt
