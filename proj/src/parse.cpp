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

#include <charconv>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>

#include "dpopt/ir.hpp"

namespace dpopt {

namespace {

struct SExpr {
  bool is_atom = false;
  std::string atom;
  std::vector<SExpr> items;
  int line = 1;
  int col = 1;
};

class Reader {
 public:
  explicit Reader(std::string_view text) : text_(text) {}

  SExpr read_top() {
    skip();
    if (at_end()) throw ParseError("empty input", line_, col_);
    SExpr e = read();
    skip();
    if (!at_end()) throw ParseError("trailing text after design", line_, col_);
    return e;
  }

 private:
  bool at_end() const { return pos_ >= text_.size(); }

  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip() {
    while (!at_end()) {
      char c = text_[pos_];
      if (c == '#') {
        while (!at_end() && text_[pos_] != '\n') advance();
      } else if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
        advance();
      } else {
        break;
      }
    }
  }

  SExpr read() {
    skip();
    if (at_end()) throw ParseError("unexpected end of input", line_, col_);
    SExpr e;
    e.line = line_;
    e.col = col_;
    char c = text_[pos_];
    if (c == ')') throw ParseError("unexpected ')'", line_, col_);
    if (c == '(') {
      advance();
      while (true) {
        skip();
        if (at_end()) throw ParseError("unterminated list", e.line, e.col);
        if (text_[pos_] == ')') {
          advance();
          break;
        }
        e.items.push_back(read());
      }
      return e;
    }
    e.is_atom = true;
    while (!at_end()) {
      c = text_[pos_];
      if (c == '(' || c == ')' || c == ' ' || c == '\t' || c == '\n' ||
          c == '\r' || c == '#')
        break;
      e.atom.push_back(c);
      advance();
    }
    return e;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

[[noreturn]] void fail(const SExpr &at, const std::string &msg) {
  throw ParseError(msg, at.line, at.col);
}

Value parse_uint(const SExpr &e, const char *what) {
  if (!e.is_atom || e.atom.empty()) fail(e, std::string("expected ") + what);
  Value v = 0;
  auto [p, ec] = std::from_chars(e.atom.data(), e.atom.data() + e.atom.size(), v);
  if (ec != std::errc() || p != e.atom.data() + e.atom.size())
    fail(e, std::string("expected ") + what + ", got '" + e.atom + "'");
  return v;
}

Width parse_width(const SExpr &e) {
  Value v = parse_uint(e, "width");
  if (v < 1 || v > kMaxWidth)
    fail(e, "width " + e.atom + " outside [1, 64]");
  return static_cast<Width>(v);
}

bool is_head(const SExpr &e, std::string_view head) {
  return !e.is_atom && !e.items.empty() && e.items[0].is_atom &&
         e.items[0].atom == head;
}

class DesignBuilder {
 public:
  Design build(const SExpr &top) {
    if (!is_head(top, "design")) fail(top, "expected (design ...)");
    Design d;
    bool seen_inputs = false, seen_outputs = false;
    for (std::size_t i = 1; i < top.items.size(); ++i) {
      const SExpr &sec = top.items[i];
      if (is_head(sec, "inputs")) {
        if (seen_inputs) fail(sec, "duplicate inputs section");
        seen_inputs = true;
        for (std::size_t j = 1; j < sec.items.size(); ++j) {
          const SExpr &in = sec.items[j];
          if (in.is_atom || in.items.size() != 2 || !in.items[0].is_atom)
            fail(in, "expected (NAME WIDTH)");
          const std::string &name = in.items[0].atom;
          Width w = parse_width(in.items[1]);
          if (!inputs_.emplace(name, w).second)
            fail(in, "duplicate input '" + name + "'");
          d.inputs.emplace_back(name, w);
        }
      } else if (is_head(sec, "let")) {
        for (std::size_t j = 1; j < sec.items.size(); ++j) {
          const SExpr &b = sec.items[j];
          if (b.is_atom || b.items.size() != 2 || !b.items[0].is_atom)
            fail(b, "expected (NAME EXPR) binding");
          const std::string &name = b.items[0].atom;
          if (lets_.count(name)) fail(b, "duplicate binding '" + name + "'");
          lets_[name] = expr(b.items[1]);
        }
      } else if (is_head(sec, "outputs")) {
        if (seen_outputs) fail(sec, "duplicate outputs section");
        seen_outputs = true;
        std::set<std::string> names;
        for (std::size_t j = 1; j < sec.items.size(); ++j) {
          const SExpr &o = sec.items[j];
          if (o.is_atom || o.items.size() != 2 || !o.items[0].is_atom)
            fail(o, "expected (NAME EXPR)");
          if (!names.insert(o.items[0].atom).second)
            fail(o, "duplicate output '" + o.items[0].atom + "'");
          d.outputs.emplace_back(o.items[0].atom, expr(o.items[1]));
        }
      } else {
        fail(sec, "unknown design section");
      }
    }
    if (!seen_inputs) fail(top, "missing inputs section");
    if (!seen_outputs) fail(top, "missing outputs section");
    return d;
  }

 private:
  ExprPtr expr(const SExpr &e) {
    if (e.is_atom) {
      auto it = lets_.find(e.atom);
      if (it == lets_.end()) fail(e, "unknown binding '" + e.atom + "'");
      return it->second;
    }
    if (e.items.empty() || !e.items[0].is_atom) fail(e, "expected operator");
    const std::string &head = e.items[0].atom;
    if (head == "var") {
      if (e.items.size() != 3 || !e.items[1].is_atom)
        fail(e, "expected (var NAME WIDTH)");
      const std::string &name = e.items[1].atom;
      Width w = parse_width(e.items[2]);
      auto it = inputs_.find(name);
      if (it == inputs_.end()) fail(e, "undeclared variable " + name);
      if (it->second != w)
        fail(e, "width mismatch for " + name + ": declared " +
                    std::to_string(it->second) + ", used " + std::to_string(w));
      return interner_.var(name, w);
    }
    if (head == "const") {
      if (e.items.size() != 3) fail(e, "expected (const VALUE WIDTH)");
      Value v = parse_uint(e.items[1], "constant value");
      Width w = parse_width(e.items[2]);
      if (v > mask(w)) fail(e, "constant does not fit its width");
      return interner_.constant(v, w);
    }
    Op op;
    if (!op_from_symbol(head, op) || op == Op::Var || op == Op::Const)
      fail(e.items[0], "unknown operator '" + head + "'");
    if (e.items.size() < 2) fail(e, "missing width");
    Width w = parse_width(e.items[1]);
    std::vector<ExprPtr> kids;
    for (std::size_t i = 2; i < e.items.size(); ++i) kids.push_back(expr(e.items[i]));
    if (op == Op::Concat && kids.size() > 2) {
      // n-ary source concatenation nests to the right
      ExprPtr tail = kids.back();
      for (std::size_t i = kids.size() - 1; i-- > 1;) {
        Width tw = kids[i]->width + tail->width;
        if (tw > kMaxWidth) fail(e, "concatenation wider than 64 bits");
        tail = interner_.op(Op::Concat, tw, {kids[i], tail});
      }
      kids = {kids[0], tail};
    }
    if (!arity_ok(op, kids.size()))
      fail(e, "wrong number of operands for '" + head + "'");
    if (op == Op::Mux && kids[0]->width != 1) fail(e, "mux select must be 1 bit");
    return interner_.op(op, w, std::move(kids));
  }

  std::map<std::string, Width> inputs_;
  std::map<std::string, ExprPtr> lets_;
  ExprInterner interner_;
};

class Printer {
 public:
  Printer(const std::vector<const Expr *> &order, const std::set<std::string> &taken,
          const std::map<const Expr *, int> &uses) {
    int k = 0;
    for (const Expr *n : order) {
      if (n->op == Op::Var || n->op == Op::Const) continue;
      if (uses.at(n) < 2) continue;
      std::string name;
      do {
        name = "t" + std::to_string(k++);
      } while (taken.count(name));
      names_[n] = name;
      bound_.push_back(n);
    }
  }

  void node(std::ostream &os, const Expr *n, bool allow_name) const {
    if (allow_name) {
      if (auto it = names_.find(n); it != names_.end()) {
        os << it->second;
        return;
      }
    }
    if (n->op == Op::Var) {
      os << "(var " << n->name << ' ' << n->width << ')';
    } else if (n->op == Op::Const) {
      os << "(const " << n->value << ' ' << n->width << ')';
    } else {
      os << '(' << op_symbol(n->op) << ' ' << n->width;
      for (const auto &c : n->children) {
        os << ' ';
        node(os, c.get(), true);
      }
      os << ')';
    }
  }

  const std::vector<const Expr *> &bound() const { return bound_; }
  const std::string &name(const Expr *n) const { return names_.at(n); }

 private:
  std::map<const Expr *, std::string> names_;
  std::vector<const Expr *> bound_;
};

std::map<const Expr *, int> count_uses(const Design &d,
                                       const std::vector<const Expr *> &order) {
  std::map<const Expr *, int> uses;
  for (const Expr *n : order) uses[n];
  for (const Expr *n : order)
    for (const auto &c : n->children) ++uses[c.get()];
  for (const auto &o : d.outputs) ++uses[o.second.get()];
  return uses;
}

}  // namespace

Design parse_design(std::string_view text) {
  Reader r(text);
  SExpr top = r.read_top();
  Design d = DesignBuilder().build(top);
  return d;
}

std::string print_design(const Design &d) {
  // Re-intern so equal subterms print as one binding regardless of how the
  // design was constructed.
  ExprInterner in;
  Design c;
  c.inputs = d.inputs;
  for (const auto &[name, e] : d.outputs) c.outputs.emplace_back(name, in.intern(e));

  auto order = topo_order(c);
  auto uses = count_uses(c, order);
  std::set<std::string> taken;
  for (const auto &i : c.inputs) taken.insert(i.first);
  Printer p(order, taken, uses);

  std::ostringstream os;
  os << "(design (inputs";
  for (const auto &[name, w] : c.inputs) os << " (" << name << ' ' << w << ')';
  os << ')';
  if (!p.bound().empty()) {
    os << " (let";
    for (const Expr *n : p.bound()) {
      os << " (" << p.name(n) << ' ';
      p.node(os, n, false);
      os << ')';
    }
    os << ')';
  }
  os << " (outputs";
  for (const auto &[name, e] : c.outputs) {
    os << " (" << name << ' ';
    p.node(os, e.get(), true);
    os << ')';
  }
  os << "))";
  return os.str();
}

std::string print_expr(const ExprPtr &e) {
  std::vector<const Expr *> order = topo_order(e);
  std::map<const Expr *, int> uses;
  for (const Expr *n : order) uses[n] = 1;
  Printer p(order, {}, uses);
  std::ostringstream os;
  p.node(os, e.get(), false);
  return os.str();
}

}  // namespace dpopt
