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

#include <cstdint>
#include <map>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace dpopt {

using Value = std::uint64_t;
using Width = std::uint32_t;

inline constexpr Width kMaxWidth = 64;

/// All-ones mask of `w` bits; `w` may be 64.
constexpr Value mask(Width w) {
  return w >= 64 ? ~Value{0} : ((Value{1} << w) - 1);
}

/// Smallest width able to hold `v` (at least 1).
Width bits_for(Value v);

/// Operator kinds. Declaration order is the tie-break order used by the
/// greedy extractor, so keep it aligned with the operator table.
enum class Op : std::uint8_t {
  LShift,
  RShift,
  Add,
  Sub,
  Neg,
  Mul,
  Mux,
  Not,
  Concat,
  Lt,
  Gt,
  Sum,
  Muxar,
  Fma,
  Var,
  Const,
};

std::string_view op_symbol(Op op);
bool op_from_symbol(std::string_view sym, Op &out);
std::string_view op_name(Op op);

/// Required arity; -1 for SUM (any n >= 3).
int op_arity(Op op);
bool arity_ok(Op op, std::size_t n);

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string &msg, int line, int col);
  int line() const { return line_; }
  int col() const { return col_; }

 private:
  int line_;
  int col_;
};

class WidthError : public Error {
 public:
  using Error::Error;
};

class EvalError : public Error {
 public:
  using Error::Error;
};

/// The single source of operator semantics. Every operator computes on
/// unbounded unsigned integers and truncates to `out` bits.
Value apply_op(Op op, Width out, std::span<const Value> args,
               std::span<const Width> arg_widths);

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

/// Immutable width-annotated node of a dataflow DAG.
struct Expr {
  Op op;
  Width width;
  std::vector<ExprPtr> children;
  Value value = 0;   // CONST payload
  std::string name;  // VAR payload
};

void check_width(Width w);

ExprPtr make_var(std::string name, Width w);
ExprPtr make_const(Value v, Width w);
ExprPtr make_op(Op op, Width w, std::vector<ExprPtr> children);

/// Hash-conses structurally identical nodes so that a DAG built through one
/// interner is maximally shared.
class ExprInterner {
 public:
  ExprPtr var(const std::string &name, Width w);
  ExprPtr constant(Value v, Width w);
  ExprPtr op(Op op, Width w, std::vector<ExprPtr> children);
  ExprPtr intern(const ExprPtr &e);

 private:
  struct Key {
    Op op;
    Width width;
    Value value;
    std::string name;
    std::vector<const Expr *> children;
    auto operator<=>(const Key &) const = default;
  };
  ExprPtr lookup(Key key, ExprPtr fresh);
  std::map<Key, ExprPtr> table_;
  std::map<const Expr *, ExprPtr> seen_;
};

bool structurally_equal(const ExprPtr &a, const ExprPtr &b);

using Env = std::map<std::string, Value>;

struct Design {
  std::vector<std::pair<std::string, Width>> inputs;
  std::vector<std::pair<std::string, ExprPtr>> outputs;

  /// Throws on undeclared variables, width mismatches or duplicate names.
  void validate() const;
  unsigned total_input_bits() const;
};

bool operator==(const Design &a, const Design &b);

/// Distinct nodes reachable from the outputs, children before parents.
std::vector<const Expr *> topo_order(const Design &d);
std::vector<const Expr *> topo_order(const ExprPtr &root);

Value eval(const Expr &e, const Env &env);
std::map<std::string, Value> eval_design(const Design &d, const Env &env);

/// Flattened form of a Design for repeated evaluation over input vectors.
class CompiledDesign {
 public:
  explicit CompiledDesign(const Design &d);
  /// `inputs` follows the design's input order; writes one value per output.
  void run(std::span<const Value> inputs, std::span<Value> outputs) const;
  std::size_t num_inputs() const { return num_inputs_; }
  std::size_t num_outputs() const { return out_slots_.size(); }

 private:
  struct Step {
    Op op;
    Width width;
    std::vector<std::uint32_t> args;
    std::vector<Width> arg_widths;
    Value value;
  };
  std::size_t num_inputs_ = 0;
  std::vector<Step> steps_;
  std::vector<std::uint32_t> out_slots_;
  mutable std::vector<Value> scratch_;
  mutable std::vector<Value> argbuf_;
};

Design parse_design(std::string_view text);
std::string print_design(const Design &d);
std::string print_expr(const ExprPtr &e);

/// Flat netlist text, one operation per line, wires named w0, w1, ...
std::string emit_netlist(const Design &d);

}  // namespace dpopt
