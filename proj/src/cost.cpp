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

#include "dpopt/cost.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace dpopt {

namespace {

struct Field {
  const char *key;
  double CostConfig::*ptr;
  bool gate;  // scales with the unit of area
};

constexpr Field kFields[] = {
    {"pa_base", &CostConfig::pa_base, true},
    {"pa_log", &CostConfig::pa_log, true},
    {"fa_row_gate", &CostConfig::fa_row_gate, true},
    {"booth_pp", &CostConfig::booth_pp, true},
    {"mux_gate", &CostConfig::mux_gate, true},
    {"not_gate", &CostConfig::not_gate, true},
    {"neg_gate", &CostConfig::neg_gate, true},
    {"const_discount", &CostConfig::const_discount, false},
};

std::string trim(const std::string &s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

int clog2(std::uint64_t v) {
  int r = 0;
  while (r < 64 && (std::uint64_t{1} << r) < v) ++r;
  return r;
}

double booth_cost(Width p, Width q, Width r, const CostConfig &cfg) {
  Width w = std::min<Width>(r, p + q);
  double rows = std::ceil(std::min(p, q) / 2.0) + 1;
  return cfg.booth_pp * w * rows + fa_row_cost(w, cfg) * std::max(rows - 2, 0.0) +
         prefix_adder_cost(w, cfg);
}

}  // namespace

CostConfig CostConfig::from_text(const std::string &text) {
  CostConfig c;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw Error("cost config line " + std::to_string(lineno) + ": expected key = value");
    std::string key = trim(line.substr(0, eq));
    std::string val = trim(line.substr(eq + 1));
    const Field *f = nullptr;
    for (const Field &cand : kFields)
      if (key == cand.key) f = &cand;
    if (!f) throw Error("cost config: unknown key '" + key + "'");
    double v;
    try {
      std::size_t used = 0;
      v = std::stod(val, &used);
      if (used != val.size()) throw std::invalid_argument(val);
    } catch (const std::exception &) {
      throw Error("cost config: bad value for '" + key + "'");
    }
    if (!std::isfinite(v) || v < 0)
      throw Error("cost config: '" + key + "' must be finite and >= 0");
    c.*(f->ptr) = v;
  }
  return c;
}

CostConfig CostConfig::load(const std::string &path) {
  std::ifstream f(path);
  if (!f) throw Error("cannot open cost config " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return from_text(ss.str());
}

std::string CostConfig::to_text() const {
  std::ostringstream out;
  out.precision(17);
  for (const Field &f : kFields) out << f.key << " = " << this->*(f.ptr) << "\n";
  return out.str();
}

std::vector<std::pair<std::string, double>> CostConfig::items() const {
  std::vector<std::pair<std::string, double>> out;
  for (const Field &f : kFields) out.emplace_back(f.key, this->*(f.ptr));
  return out;
}

CostConfig CostConfig::scaled(double k) const {
  CostConfig c = *this;
  for (const Field &f : kFields)
    if (f.gate) c.*(f.ptr) *= k;
  return c;
}

int csd_digits(Value v) {
  // non-adjacent form: each odd residue picks the digit +1 or -1 that makes
  // the remainder divisible by 4
  unsigned __int128 x = v;
  int digits = 0;
  while (x != 0) {
    if (x & 1) {
      ++digits;
      if ((x & 3) == 3)
        x += 1;
      else
        x -= 1;
    }
    x >>= 1;
  }
  return digits;
}

double prefix_adder_cost(Width w, const CostConfig &cfg) {
  return w * (cfg.pa_base + cfg.pa_log * clog2(std::max<Width>(w, 2)));
}

double fa_row_cost(Width w, const CostConfig &cfg) { return cfg.fa_row_gate * w; }

double op_cost(const NodeCostQuery &q, const CostConfig &cfg) {
  const auto &in = q.operands;
  if (!arity_ok(q.op, in.size()))
    throw Error(std::string("op_cost: wrong arity for ") + std::string(op_name(q.op)));
  const Width out = q.out_width;
  auto any_const = [&] {
    return std::any_of(in.begin(), in.end(), [](const Operand &o) { return o.constant; });
  };

  switch (q.op) {
    case Op::Var:
    case Op::Const:
    case Op::Concat:
      return 0;
    case Op::Add:
    case Op::Sub: {
      Width w = std::min<Width>(out, std::max(in[0].width, in[1].width) + 1);
      double c = prefix_adder_cost(w, cfg);
      if (q.op == Op::Sub) c += cfg.not_gate * w;
      return any_const() ? c * cfg.const_discount : c;
    }
    case Op::Lt:
    case Op::Gt: {
      double c = prefix_adder_cost(std::max(in[0].width, in[1].width), cfg);
      return any_const() ? c * cfg.const_discount : c;
    }
    case Op::Mul: {
      Width p = in[0].width, qq = in[1].width;
      double booth = booth_cost(p, qq, out, cfg);
      const Operand *k = in[0].constant ? &in[0] : in[1].constant ? &in[1] : nullptr;
      if (!k) return booth;
      if (in[0].constant && in[1].constant) return 0;
      int d = csd_digits(*k->constant);
      if (d <= 1) return 0;
      Width w = std::min<Width>(out, p + qq);
      double csd = fa_row_cost(w, cfg) * (d > 2 ? d - 2 : 0) + prefix_adder_cost(w, cfg);
      return std::min(csd, booth);
    }
    case Op::LShift:
    case Op::RShift:
      if (in[1].constant) return 0;
      return cfg.mux_gate * out * in[1].width;
    case Op::Mux:
      return cfg.mux_gate * out;
    case Op::Not:
      return cfg.not_gate * std::min(in[0].width, out);
    case Op::Neg:
      return cfg.neg_gate * std::min(in[0].width, out);
    case Op::Sum: {
      Width widest = 0;
      for (const auto &o : in) widest = std::max(widest, o.width);
      auto n = static_cast<Width>(in.size());
      Width w = std::min<Width>(out, widest + clog2(n));
      return fa_row_cost(w, cfg) * (n >= 2 ? n - 2 : 0) + prefix_adder_cost(w, cfg);
    }
    case Op::Fma: {
      Width p = in[0].width, qq = in[1].width;
      return booth_cost(p, qq, out, cfg) + fa_row_cost(std::min<Width>(out, p + qq), cfg);
    }
    case Op::Muxar: {
      Width r = in[0].width, qa = in[1].width;
      Width w = std::min<Width>(out, qa + clog2(std::max<Width>(r, 2)));
      return cfg.mux_gate * qa * r + fa_row_cost(w, cfg) * (r >= 2 ? r - 2 : 0) +
             prefix_adder_cost(w, cfg);
    }
  }
  return 0;
}

double node_cost(const EGraph &g, const ENode &n, const CostConfig &cfg) {
  NodeCostQuery q{n.op, n.width, {}};
  for (ClassId c : n.children) q.operands.push_back(Operand{g.width(c), g.constant(c)});
  return op_cost(q, cfg);
}

double design_cost(const Design &d, const CostConfig &cfg) {
  // re-intern so structurally equal subterms are charged once
  ExprInterner interner;
  Design shared = d;
  for (auto &[name, e] : shared.outputs) e = interner.intern(e);
  double total = 0;
  for (const Expr *e : topo_order(shared)) {
    NodeCostQuery q{e->op, e->width, {}};
    for (const auto &c : e->children) {
      Operand o{c->width, std::nullopt};
      if (c->op == Op::Const) o.constant = c->value;
      q.operands.push_back(o);
    }
    total += op_cost(q, cfg);
  }
  return total;
}

double dag_cost(std::span<const NodeCostQuery> nodes, const CostConfig &cfg) {
  double total = 0;
  for (const auto &q : nodes) total += op_cost(q, cfg);
  return total;
}

}  // namespace dpopt
