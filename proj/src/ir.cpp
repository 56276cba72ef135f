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

#include "dpopt/ir.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <unordered_map>

namespace dpopt {

namespace {

struct OpInfo {
  Op op;
  std::string_view symbol;
  std::string_view name;
  int arity;
};

constexpr OpInfo kOps[] = {
    {Op::LShift, "<<", "LSHIFT", 2}, {Op::RShift, ">>", "RSHIFT", 2},
    {Op::Add, "+", "ADD", 2},        {Op::Sub, "-", "SUB", 2},
    {Op::Neg, "neg", "NEG", 1},      {Op::Mul, "*", "MUL", 2},
    {Op::Mux, "mux", "MUX", 3},      {Op::Not, "~", "NOT", 1},
    {Op::Concat, "concat", "CONCAT", 2}, {Op::Lt, "<", "LT", 2},
    {Op::Gt, ">", "GT", 2},          {Op::Sum, "sum", "SUM", -1},
    {Op::Muxar, "muxar", "MUXAR", 3}, {Op::Fma, "fma", "FMA", 3},
    {Op::Var, "var", "VAR", 0},      {Op::Const, "const", "CONST", 0},
};

const OpInfo &info(Op op) { return kOps[static_cast<int>(op)]; }

Value shl(Value a, Value b) { return b >= 64 ? 0 : a << b; }
Value shr(Value a, Value b) { return b >= 64 ? 0 : a >> b; }

}  // namespace

Width bits_for(Value v) {
  Width w = 1;
  while (w < 64 && (v >> w) != 0) ++w;
  return w;
}

std::string_view op_symbol(Op op) { return info(op).symbol; }
std::string_view op_name(Op op) { return info(op).name; }
int op_arity(Op op) { return info(op).arity; }

bool op_from_symbol(std::string_view sym, Op &out) {
  for (const auto &i : kOps) {
    if (i.symbol == sym) {
      out = i.op;
      return true;
    }
  }
  return false;
}

bool arity_ok(Op op, std::size_t n) {
  int a = op_arity(op);
  return a < 0 ? n >= 3 : n == static_cast<std::size_t>(a);
}

ParseError::ParseError(const std::string &msg, int line, int col)
    : Error(std::to_string(line) + ":" + std::to_string(col) + ": " + msg),
      line_(line),
      col_(col) {}

Value apply_op(Op op, Width out, std::span<const Value> a,
               std::span<const Width> aw) {
  const Value m = mask(out);
  switch (op) {
    case Op::LShift: return shl(a[0], a[1]) & m;
    case Op::RShift: return shr(a[0], a[1]) & m;
    case Op::Add: return (a[0] + a[1]) & m;
    case Op::Sub: return (a[0] - a[1]) & m;
    case Op::Neg: return (Value{0} - a[0]) & m;
    case Op::Mul: return (a[0] * a[1]) & m;
    case Op::Mux: return ((a[0] & 1) ? a[1] : a[2]) & m;
    case Op::Not: return (~a[0] & mask(aw[0])) & m;
    case Op::Concat: return (shl(a[0], aw[1]) | a[1]) & m;
    case Op::Lt: return a[0] < a[1] ? 1 : 0;
    case Op::Gt: return a[0] > a[1] ? 1 : 0;
    case Op::Sum: {
      Value s = 0;
      for (Value v : a) s += v;
      return s & m;
    }
    case Op::Fma: return (a[0] * a[1] + a[2]) & m;
    case Op::Muxar: {
      // bit i of the select picks a or c as the partial product at weight 2^i
      Value s = 0;
      for (Width i = 0; i < aw[0] && i < 64; ++i)
        s += ((a[0] >> i) & 1 ? a[1] : a[2]) << i;
      return s & m;
    }
    case Op::Var:
    case Op::Const: break;
  }
  throw EvalError("apply_op: leaf operator has no semantics");
}

void check_width(Width w) {
  if (w < 1 || w > kMaxWidth)
    throw WidthError("width " + std::to_string(w) + " outside [1, 64]");
}

ExprPtr make_var(std::string name, Width w) {
  check_width(w);
  return std::make_shared<const Expr>(Expr{Op::Var, w, {}, 0, std::move(name)});
}

ExprPtr make_const(Value v, Width w) {
  check_width(w);
  if (v > mask(w))
    throw WidthError("constant " + std::to_string(v) + " does not fit in " +
                     std::to_string(w) + " bits");
  return std::make_shared<const Expr>(Expr{Op::Const, w, {}, v, {}});
}

ExprPtr make_op(Op op, Width w, std::vector<ExprPtr> children) {
  check_width(w);
  if (op == Op::Var || op == Op::Const)
    throw Error("make_op: use make_var/make_const for leaves");
  if (!arity_ok(op, children.size()))
    throw Error(std::string("wrong arity for ") + std::string(op_name(op)));
  if (op == Op::Mux && children[0]->width != 1)
    throw WidthError("mux select must be 1 bit wide");
  return std::make_shared<const Expr>(Expr{op, w, std::move(children), 0, {}});
}

ExprPtr ExprInterner::lookup(Key key, ExprPtr fresh) {
  auto [it, inserted] = table_.emplace(std::move(key), fresh);
  return it->second;
}

ExprPtr ExprInterner::var(const std::string &name, Width w) {
  return lookup(Key{Op::Var, w, 0, name, {}}, make_var(name, w));
}

ExprPtr ExprInterner::constant(Value v, Width w) {
  return lookup(Key{Op::Const, w, v, {}, {}}, make_const(v, w));
}

ExprPtr ExprInterner::op(Op op, Width w, std::vector<ExprPtr> children) {
  for (auto &c : children) c = intern(c);
  Key key{op, w, 0, {}, {}};
  for (const auto &c : children) key.children.push_back(c.get());
  auto it = table_.find(key);
  if (it != table_.end()) return it->second;
  return lookup(std::move(key), make_op(op, w, std::move(children)));
}

ExprPtr ExprInterner::intern(const ExprPtr &e) {
  if (auto it = seen_.find(e.get()); it != seen_.end()) return it->second;
  ExprPtr r;
  if (e->op == Op::Var)
    r = var(e->name, e->width);
  else if (e->op == Op::Const)
    r = constant(e->value, e->width);
  else
    r = op(e->op, e->width, e->children);
  seen_.emplace(e.get(), r);
  return r;
}

bool structurally_equal(const ExprPtr &a, const ExprPtr &b) {
  std::set<std::pair<const Expr *, const Expr *>> done;
  std::function<bool(const Expr *, const Expr *)> eq = [&](const Expr *x,
                                                           const Expr *y) {
    if (x == y) return true;
    if (!done.insert({x, y}).second) return true;
    if (x->op != y->op || x->width != y->width || x->value != y->value ||
        x->name != y->name || x->children.size() != y->children.size())
      return false;
    for (std::size_t i = 0; i < x->children.size(); ++i)
      if (!eq(x->children[i].get(), y->children[i].get())) return false;
    return true;
  };
  return eq(a.get(), b.get());
}

void Design::validate() const {
  std::map<std::string, Width> decl;
  for (const auto &[name, w] : inputs) {
    check_width(w);
    if (!decl.emplace(name, w).second)
      throw Error("duplicate input '" + name + "'");
  }
  std::set<std::string> outs;
  for (const auto &[name, e] : outputs)
    if (!outs.insert(name).second) throw Error("duplicate output '" + name + "'");
  for (const Expr *n : topo_order(*this)) {
    if (n->op != Op::Var) continue;
    auto it = decl.find(n->name);
    if (it == decl.end())
      throw Error("undeclared variable '" + n->name + "'");
    if (it->second != n->width)
      throw WidthError("variable '" + n->name + "' used at width " +
                       std::to_string(n->width) + " but declared " +
                       std::to_string(it->second));
  }
}

unsigned Design::total_input_bits() const {
  unsigned bits = 0;
  for (const auto &in : inputs) bits += in.second;
  return bits;
}

bool operator==(const Design &a, const Design &b) {
  if (a.inputs != b.inputs || a.outputs.size() != b.outputs.size()) return false;
  for (std::size_t i = 0; i < a.outputs.size(); ++i) {
    if (a.outputs[i].first != b.outputs[i].first) return false;
    if (!structurally_equal(a.outputs[i].second, b.outputs[i].second)) return false;
  }
  return true;
}

namespace {

void topo_visit(const Expr *e, std::set<const Expr *> &seen,
                std::vector<const Expr *> &out) {
  // iterative post-order; designs from saturation can be deep
  std::vector<std::pair<const Expr *, std::size_t>> stack{{e, 0}};
  if (!seen.insert(e).second) return;
  while (!stack.empty()) {
    auto &[node, next] = stack.back();
    if (next < node->children.size()) {
      const Expr *c = node->children[next++].get();
      if (seen.insert(c).second) stack.push_back({c, 0});
    } else {
      out.push_back(node);
      stack.pop_back();
    }
  }
}

}  // namespace

std::vector<const Expr *> topo_order(const Design &d) {
  std::set<const Expr *> seen;
  std::vector<const Expr *> out;
  for (const auto &o : d.outputs) topo_visit(o.second.get(), seen, out);
  return out;
}

std::vector<const Expr *> topo_order(const ExprPtr &root) {
  std::set<const Expr *> seen;
  std::vector<const Expr *> out;
  topo_visit(root.get(), seen, out);
  return out;
}

namespace {

Value eval_memo(const Expr *root, const Env &env,
                std::unordered_map<const Expr *, Value> &memo) {
  std::set<const Expr *> seen;
  std::vector<const Expr *> order;
  topo_visit(root, seen, order);
  std::vector<Value> args;
  std::vector<Width> widths;
  for (const Expr *n : order) {
    if (memo.count(n)) continue;
    Value v = 0;
    if (n->op == Op::Var) {
      auto it = env.find(n->name);
      if (it == env.end()) throw EvalError("unbound variable '" + n->name + "'");
      if (it->second > mask(n->width))
        throw EvalError("value of '" + n->name + "' exceeds its width");
      v = it->second;
    } else if (n->op == Op::Const) {
      v = n->value;
    } else {
      args.clear();
      widths.clear();
      for (const auto &c : n->children) {
        args.push_back(memo.at(c.get()));
        widths.push_back(c->width);
      }
      v = apply_op(n->op, n->width, args, widths);
    }
    memo.emplace(n, v);
  }
  return memo.at(root);
}

}  // namespace

Value eval(const Expr &e, const Env &env) {
  std::unordered_map<const Expr *, Value> memo;
  return eval_memo(&e, env, memo);
}

std::map<std::string, Value> eval_design(const Design &d, const Env &env) {
  for (const auto &[name, w] : d.inputs) {
    auto it = env.find(name);
    if (it == env.end()) throw EvalError("input '" + name + "' not bound");
    if (it->second > mask(w))
      throw EvalError("value " + std::to_string(it->second) + " of input '" +
                      name + "' exceeds " + std::to_string(w) + " bits");
  }
  for (const auto &[name, v] : env) {
    bool declared = std::any_of(d.inputs.begin(), d.inputs.end(),
                                [&](const auto &in) { return in.first == name; });
    if (!declared) throw EvalError("binding for undeclared input '" + name + "'");
  }
  std::unordered_map<const Expr *, Value> memo;
  std::map<std::string, Value> out;
  for (const auto &[name, e] : d.outputs) out[name] = eval_memo(e.get(), env, memo);
  return out;
}

CompiledDesign::CompiledDesign(const Design &d) : num_inputs_(d.inputs.size()) {
  std::map<std::string, std::uint32_t> input_slot;
  for (std::uint32_t i = 0; i < d.inputs.size(); ++i)
    input_slot[d.inputs[i].first] = i;
  std::unordered_map<const Expr *, std::uint32_t> slot;
  std::uint32_t next = static_cast<std::uint32_t>(num_inputs_);
  for (const Expr *n : topo_order(d)) {
    if (n->op == Op::Var) {
      auto it = input_slot.find(n->name);
      if (it == input_slot.end())
        throw EvalError("unbound variable '" + n->name + "'");
      slot[n] = it->second;
      continue;
    }
    Step s{n->op, n->width, {}, {}, n->value};
    for (const auto &c : n->children) {
      s.args.push_back(slot.at(c.get()));
      s.arg_widths.push_back(c->width);
    }
    slot[n] = next++;
    steps_.push_back(std::move(s));
  }
  for (const auto &o : d.outputs) out_slots_.push_back(slot.at(o.second.get()));
  scratch_.resize(next);
}

void CompiledDesign::run(std::span<const Value> inputs,
                         std::span<Value> outputs) const {
  std::copy(inputs.begin(), inputs.end(), scratch_.begin());
  std::size_t k = num_inputs_;
  for (const Step &s : steps_) {
    if (s.op == Op::Const) {
      scratch_[k++] = s.value;
      continue;
    }
    argbuf_.clear();
    for (auto a : s.args) argbuf_.push_back(scratch_[a]);
    scratch_[k++] = apply_op(s.op, s.width, argbuf_, s.arg_widths);
  }
  for (std::size_t i = 0; i < out_slots_.size(); ++i)
    outputs[i] = scratch_[out_slots_[i]];
}

}  // namespace dpopt
