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

#include "dpopt/extract.hpp"

#include <functional>
#include <limits>
#include <set>

namespace dpopt {

namespace {

struct Best {
  double cost = std::numeric_limits<double>::infinity();
  std::uint64_t count = 0;
  const ENode *node = nullptr;
};

// Tie-break after cost: fewer nodes, then operator order, then child ids.
bool better(double cost, std::uint64_t count, const ENode &n, const Best &cur) {
  if (!cur.node) return true;
  if (cost != cur.cost) return cost < cur.cost;
  if (count != cur.count) return count < cur.count;
  if (n.op != cur.node->op) return n.op < cur.node->op;
  return n.children < cur.node->children;
}

}  // namespace

Selection extract_greedy(const EGraph &g, const std::vector<ClassId> &roots,
                         const CostConfig &cfg) {
  const auto ids = g.class_ids();
  std::map<ClassId, Best> best;
  std::map<const ENode *, double> own;
  for (ClassId c : ids)
    for (const ENode &n : g.eclass(c).nodes) own[&n] = node_cost(g, n, cfg);

  bool changed = true;
  while (changed) {
    changed = false;
    for (ClassId c : ids) {
      Best &b = best[c];
      for (const ENode &n : g.eclass(c).nodes) {
        double cost = own[&n];
        std::uint64_t count = 1;
        bool finite = true;
        for (ClassId k : n.children) {
          auto it = best.find(g.find(k));
          if (it == best.end() || !it->second.node) {
            finite = false;
            break;
          }
          cost += it->second.cost;
          count = std::min<std::uint64_t>(count + it->second.count, 1ULL << 60);
        }
        if (!finite) continue;
        if (better(cost, count, n, b)) {
          b = Best{cost, count, &n};
          changed = true;
        }
      }
    }
  }

  Selection sel;
  std::vector<ClassId> stack;
  for (ClassId r : roots) {
    r = g.find(r);
    sel.roots.push_back(r);
    stack.push_back(r);
  }
  while (!stack.empty()) {
    ClassId c = stack.back();
    stack.pop_back();
    if (sel.chosen.count(c)) continue;
    const Best &b = best[c];
    if (!b.node) throw ExtractionError("class " + std::to_string(c) + " has no finite-cost implementation");
    ENode n = g.canonicalize(*b.node);
    for (ClassId k : n.children) stack.push_back(k);
    sel.chosen.emplace(c, std::move(n));
  }
  return sel;
}

std::string check_selection(const Selection &sel) {
  for (ClassId r : sel.roots)
    if (!sel.chosen.count(r)) return "root " + std::to_string(r) + " not selected";
  for (const auto &[c, n] : sel.chosen)
    for (ClassId k : n.children)
      if (!sel.chosen.count(k))
        return "class " + std::to_string(c) + " needs unselected child " + std::to_string(k);
  // iterative three-colour DFS for cycles
  std::map<ClassId, int> colour;
  for (const auto &[start, _] : sel.chosen) {
    if (colour[start]) continue;
    std::vector<std::pair<ClassId, std::size_t>> stack{{start, 0}};
    colour[start] = 1;
    while (!stack.empty()) {
      auto &[c, i] = stack.back();
      const auto &kids = sel.chosen.at(c).children;
      if (i == kids.size()) {
        colour[c] = 2;
        stack.pop_back();
        continue;
      }
      ClassId k = kids[i++];
      if (colour[k] == 1) return "cycle through class " + std::to_string(k);
      if (colour[k] == 0) {
        colour[k] = 1;
        stack.emplace_back(k, 0);
      }
    }
  }
  return "";
}

namespace {

std::set<ClassId> reachable(const Selection &sel) {
  std::set<ClassId> seen;
  std::vector<ClassId> stack(sel.roots.begin(), sel.roots.end());
  while (!stack.empty()) {
    ClassId c = stack.back();
    stack.pop_back();
    if (!seen.insert(c).second) continue;
    auto it = sel.chosen.find(c);
    if (it == sel.chosen.end()) continue;
    for (ClassId k : it->second.children) stack.push_back(k);
  }
  return seen;
}

}  // namespace

double selection_cost(const EGraph &g, const Selection &sel, const CostConfig &cfg) {
  double total = 0;
  for (ClassId c : reachable(sel)) total += node_cost(g, sel.chosen.at(c), cfg);
  return total;
}

std::size_t selection_mul_count(const Selection &sel) {
  std::size_t n = 0;
  for (ClassId c : reachable(sel))
    if (sel.chosen.at(c).op == Op::Mul) ++n;
  return n;
}

Design selection_to_design(const Selection &sel, const EGraph &g,
                           const std::vector<std::pair<std::string, Width>> &inputs,
                           const std::vector<std::string> &names) {
  if (names.size() != sel.roots.size())
    throw Error("selection_to_design: one name per root required");
  if (auto why = check_selection(sel); !why.empty())
    throw ExtractionError("invalid selection: " + why);
  (void)g;
  ExprInterner interner;
  std::map<ClassId, ExprPtr> built;
  std::function<ExprPtr(ClassId)> build = [&](ClassId c) -> ExprPtr {
    if (auto it = built.find(c); it != built.end()) return it->second;
    const ENode &n = sel.chosen.at(c);
    ExprPtr e;
    if (n.op == Op::Var)
      e = interner.var(n.name, n.width);
    else if (n.op == Op::Const)
      e = interner.constant(n.value, n.width);
    else {
      std::vector<ExprPtr> kids;
      for (ClassId k : n.children) kids.push_back(build(k));
      e = interner.op(n.op, n.width, std::move(kids));
    }
    built.emplace(c, e);
    return e;
  };
  Design d;
  d.inputs = inputs;
  for (std::size_t i = 0; i < names.size(); ++i)
    d.outputs.emplace_back(names[i], build(sel.roots[i]));
  d.validate();
  return d;
}

}  // namespace dpopt
