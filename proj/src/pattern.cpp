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

#include "dpopt/pattern.hpp"

#include <charconv>
#include <sstream>

namespace dpopt {

long long eval_width(const WidthTerm &t, const Substitution &s) {
  long long v = t.offset;
  for (int var : {t.var, t.var2}) {
    if (var < 0) continue;
    Width w = s.w(var);
    if (w == 0) return -1;
    v += w;
  }
  return v;
}

int PatternVars::term(const std::string &name) const {
  for (std::size_t i = 0; i < terms.size(); ++i)
    if (terms[i] == name) return static_cast<int>(i);
  return -1;
}

int PatternVars::width(const std::string &name) const {
  for (std::size_t i = 0; i < widths.size(); ++i)
    if (widths[i] == name) return static_cast<int>(i);
  return -1;
}

namespace {

int intern_name(std::vector<std::string> &names, const std::string &n) {
  for (std::size_t i = 0; i < names.size(); ++i)
    if (names[i] == n) return static_cast<int>(i);
  names.push_back(n);
  return static_cast<int>(names.size() - 1);
}

bool is_number(const std::string &s) {
  return !s.empty() && s.find_first_not_of("0123456789") == std::string::npos;
}

class PatternParser {
 public:
  PatternParser(const std::string &text, PatternVars &vars,
                const std::vector<std::pair<std::string, ConstFn>> &fns)
      : vars_(vars), fns_(fns) {
    std::string cur;
    for (char c : text) {
      if (c == '(' || c == ')') {
        if (!cur.empty()) tokens_.push_back(cur), cur.clear();
        tokens_.push_back(std::string(1, c));
      } else if (c == ' ' || c == '\n' || c == '\t') {
        if (!cur.empty()) tokens_.push_back(cur), cur.clear();
      } else {
        cur.push_back(c);
      }
    }
    if (!cur.empty()) tokens_.push_back(cur);
  }

  Pattern run() {
    p_.root = node();
    if (pos_ != tokens_.size()) throw Error("pattern: trailing tokens");
    return std::move(p_);
  }

 private:
  const std::string &next() {
    if (pos_ >= tokens_.size()) throw Error("pattern: unexpected end");
    return tokens_[pos_++];
  }

  WidthTerm width(const std::string &s) {
    WidthTerm t;
    if (is_number(s)) {
      t.offset = std::stoi(s);
      return t;
    }
    auto plus = s.find('+');
    auto minus = s.find('-');
    if (plus != std::string::npos) {
      std::string a = s.substr(0, plus), b = s.substr(plus + 1);
      t.var = intern_name(vars_.widths, a);
      if (is_number(b))
        t.offset = std::stoi(b);
      else
        t.var2 = intern_name(vars_.widths, b);
      return t;
    }
    if (minus != std::string::npos) {
      t.var = intern_name(vars_.widths, s.substr(0, minus));
      t.offset = -std::stoi(s.substr(minus + 1));
      return t;
    }
    t.var = intern_name(vars_.widths, s);
    return t;
  }

  int push(PatNode n) {
    p_.nodes.push_back(std::move(n));
    return static_cast<int>(p_.nodes.size() - 1);
  }

  int node() {
    std::string tok = next();
    if (tok == "(") {
      std::string head = next();
      PatNode n;
      if (head == "const") {
        std::string v = next();
        n.width = width(next());
        if (next() != ")") throw Error("pattern: malformed const");
        if (!v.empty() && v[0] == '@') {
          n.kind = PatNode::Kind::ConstFn;
          for (const auto &[name, fn] : fns_)
            if (name == v.substr(1)) n.fn = fn;
          if (!n.fn) throw Error("pattern: unknown constant function " + v);
        } else {
          n.kind = PatNode::Kind::ConstLit;
          n.literal = std::stoull(v);
        }
        return push(std::move(n));
      }
      if (!op_from_symbol(head, n.op)) throw Error("pattern: unknown op " + head);
      n.width = width(next());
      std::vector<int> kids;
      while (true) {
        if (tokens_[pos_] == ")") {
          ++pos_;
          break;
        }
        if (tokens_[pos_] == "...") {
          ++pos_;
          n.variadic = true;
          continue;
        }
        kids.push_back(node());
      }
      n.children = std::move(kids);
      return push(std::move(n));
    }
    if (tok.size() > 1 && tok[0] == '?') {
      auto colon = tok.find(':');
      if (colon == std::string::npos) throw Error("pattern: term needs a width: " + tok);
      std::string name = tok.substr(1, colon - 1);
      PatNode n;
      n.kind = PatNode::Kind::Term;
      if (!name.empty() && name.back() == '#') {
        name.pop_back();
        n.kind = PatNode::Kind::ConstTerm;
      }
      n.term = intern_name(vars_.terms, name);
      n.width = width(tok.substr(colon + 1));
      return push(std::move(n));
    }
    throw Error("pattern: unexpected token " + tok);
  }

  PatternVars &vars_;
  const std::vector<std::pair<std::string, ConstFn>> &fns_;
  std::vector<std::string> tokens_;
  std::size_t pos_ = 0;
  Pattern p_;
};

using Deferred = std::vector<std::pair<WidthTerm, Width>>;

bool bind_width(Substitution &s, const WidthTerm &t, Width actual, Deferred &deferred) {
  if (t.is_literal()) return static_cast<long long>(actual) == t.offset;
  if (t.is_simple_var()) {
    Width &slot = s.widths[static_cast<std::size_t>(t.var)];
    if (slot == 0) {
      slot = actual;
      return true;
    }
    return slot == actual;
  }
  deferred.emplace_back(t, actual);
  return true;
}

bool bind_term(const EGraph &g, Substitution &s, int term, ClassId cls) {
  ClassId &slot = s.terms[static_cast<std::size_t>(term)];
  if (slot == kNoClass) {
    slot = cls;
    s.consts[static_cast<std::size_t>(term)] = g.constant(cls);
    return true;
  }
  return g.find(slot) == cls;
}

struct Frame {
  int pat;
  ClassId cls;
};

class Matcher {
 public:
  Matcher(const EGraph &g, const Pattern &p, std::vector<Match> &out)
      : g_(g), p_(p), out_(out) {}

  void search(std::vector<Frame> todo, Substitution s, Deferred deferred, ClassId root) {
    while (!todo.empty()) {
      Frame f = todo.back();
      todo.pop_back();
      ClassId cls = g_.find(f.cls);
      const PatNode &pn = p_.at(f.pat);
      switch (pn.kind) {
        case PatNode::Kind::Term:
        case PatNode::Kind::ConstTerm:
          if (pn.kind == PatNode::Kind::ConstTerm && !g_.constant(cls)) return;
          if (!bind_term(g_, s, pn.term, cls)) return;
          if (!bind_width(s, pn.width, g_.width(cls), deferred)) return;
          continue;
        case PatNode::Kind::ConstLit: {
          auto k = g_.constant(cls);
          if (!k || *k != pn.literal) return;
          continue;
        }
        case PatNode::Kind::ConstFn:
          return;
        case PatNode::Kind::Op: {
          const auto &nodes = g_.eclass(cls).nodes;
          for (const ENode &n : nodes) {
            if (n.op != pn.op) continue;
            std::size_t fixed = pn.children.size();
            if (pn.variadic ? n.children.size() < fixed : n.children.size() != fixed)
              continue;
            Substitution s2 = s;
            Deferred d2 = deferred;
            if (!bind_width(s2, pn.width, n.width, d2)) continue;
            if (pn.variadic) {
              s2.tail.clear();
              s2.tail_widths.clear();
              s2.tail_consts.clear();
              for (std::size_t i = fixed; i < n.children.size(); ++i) {
                ClassId c = g_.find(n.children[i]);
                s2.tail.push_back(c);
                s2.tail_widths.push_back(g_.width(c));
                s2.tail_consts.push_back(g_.constant(c));
              }
            }
            std::vector<Frame> t2 = todo;
            for (std::size_t i = fixed; i-- > 0;)
              t2.push_back(Frame{pn.children[i], n.children[i]});
            search(std::move(t2), std::move(s2), std::move(d2), root);
          }
          return;
        }
      }
    }
    for (const auto &[t, actual] : deferred)
      if (eval_width(t, s) != static_cast<long long>(actual)) return;
    out_.push_back(Match{std::move(s), root});
  }

 private:
  const EGraph &g_;
  const Pattern &p_;
  std::vector<Match> &out_;
};

}  // namespace

Pattern parse_pattern(const std::string &text, PatternVars &vars,
                      const std::vector<std::pair<std::string, ConstFn>> &fns) {
  return PatternParser(text, vars, fns).run();
}

std::vector<Match> ematch_class(const EGraph &g, const Pattern &p, ClassId c,
                                std::size_t n_terms, std::size_t n_widths) {
  std::vector<Match> out;
  c = g.find(c);
  Matcher(g, p, out).search({Frame{p.root, c}}, Substitution(n_terms, n_widths), {}, c);
  return out;
}

std::vector<Match> ematch(const EGraph &g, const Pattern &p, std::size_t n_terms,
                          std::size_t n_widths) {
  std::vector<Match> out;
  Matcher m(g, p, out);
  for (ClassId c : g.class_ids())
    m.search({Frame{p.root, c}}, Substitution(n_terms, n_widths), {}, c);
  return out;
}

}  // namespace dpopt
