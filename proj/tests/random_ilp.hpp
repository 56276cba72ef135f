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

// Random extraction models and an exhaustive reference solver.
#pragma once

#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <set>

#include "dpopt/extract.hpp"

namespace randilp {

using dpopt::ClassId;
using dpopt::IlpModel;

// Node count per class is 1..max_nodes; children may point anywhere, so
// cycles (including self loops) occur.
inline IlpModel random_model(std::mt19937_64 &rng, std::size_t n_classes, std::size_t max_nodes) {
  IlpModel m;
  for (ClassId c = 0; c < n_classes; ++c) m.classes.push_back(c);
  for (ClassId c = 0; c < n_classes; ++c) {
    std::size_t k = rng() % 2 ? 1 : 1 + rng() % max_nodes;
    for (std::size_t j = 0; j < k; ++j) {
      IlpModel::Node n;
      n.eclass = c;
      std::size_t arity = rng() % 3;
      std::set<ClassId> kids;
      for (std::size_t a = 0; a < arity; ++a) kids.insert(static_cast<ClassId>(rng() % n_classes));
      n.child_classes.assign(kids.begin(), kids.end());
      n.cost = static_cast<double>(rng() % 4 == 0 ? 0 : rng() % 20);
      n.is_mul = rng() % 3 == 0;
      // distinct payloads keep nodes of one class distinct, as hash-consing would
      n.node = dpopt::ENode{n.is_mul ? dpopt::Op::Mul : dpopt::Op::Add, 8, n.child_classes, j, {}};
      if (arity == 0)
        n.node = dpopt::ENode{dpopt::Op::Var, 8, {}, 0, "v" + std::to_string(c) + "_" + std::to_string(j)};
      m.nodes.push_back(std::move(n));
    }
  }
  std::size_t n_roots = 1 + rng() % 2;
  std::set<ClassId> roots;
  for (std::size_t i = 0; i < n_roots; ++i) roots.insert(static_cast<ClassId>(rng() % n_classes));
  m.roots.assign(roots.begin(), roots.end());

  // keep only classes reachable from the roots through any node
  std::set<ClassId> seen(roots.begin(), roots.end());
  std::vector<ClassId> stack(roots.begin(), roots.end());
  while (!stack.empty()) {
    ClassId c = stack.back();
    stack.pop_back();
    for (const auto &n : m.nodes)
      if (n.eclass == c)
        for (ClassId k : n.child_classes)
          if (seen.insert(k).second) stack.push_back(k);
  }
  IlpModel pruned;
  pruned.roots = m.roots;
  pruned.classes.assign(seen.begin(), seen.end());
  for (auto &n : m.nodes)
    if (seen.count(n.eclass)) pruned.nodes.push_back(std::move(n));
  return pruned;
}

struct Brute {
  bool feasible = false;
  double cost = std::numeric_limits<double>::infinity();
  std::size_t muls = 0;
};

// Number of full assignments the reference solver would enumerate.
inline double search_space(const IlpModel &m) {
  std::map<ClassId, std::size_t> per;
  for (const auto &n : m.nodes) ++per[n.eclass];
  double s = 1;
  for (const auto &[c, k] : per) s *= static_cast<double>(k);
  return s;
}

// Tries every assignment of one node to every class, keeps the classes
// reachable from the roots, and rejects assignments whose reachable part has
// a cycle. Minimizes (cost, multiplier count).
inline Brute brute_force(const IlpModel &m) {
  std::map<ClassId, std::vector<std::size_t>> members;
  for (std::size_t i = 0; i < m.nodes.size(); ++i) members[m.nodes[i].eclass].push_back(i);
  std::vector<ClassId> classes;
  for (const auto &[c, v] : members) classes.push_back(c);
  Brute best;
  for (ClassId r : m.roots)
    if (!members.count(r)) return best;
  if (m.roots.empty()) {
    best.feasible = true;
    best.cost = 0;
    return best;
  }
  std::vector<std::size_t> digit(classes.size(), 0);
  std::map<ClassId, std::size_t> pos;
  for (std::size_t i = 0; i < classes.size(); ++i) pos[classes[i]] = i;
  for (;;) {
    auto pick = [&](ClassId c) { return members[c][digit[pos.at(c)]]; };
    // reachable set plus cycle check with colours
    std::map<ClassId, int> colour;
    bool cyclic = false;
    std::function<void(ClassId)> visit = [&](ClassId c) {
      if (cyclic) return;
      colour[c] = 1;
      for (ClassId k : m.nodes[pick(c)].child_classes) {
        if (colour[k] == 1) {
          cyclic = true;
          return;
        }
        if (colour[k] == 0) visit(k);
      }
      colour[c] = 2;
    };
    for (ClassId r : m.roots)
      if (colour[r] == 0) visit(r);
    if (!cyclic) {
      double cost = 0;
      std::size_t muls = 0;
      for (const auto &[c, col] : colour)
        if (col == 2) {
          cost += m.nodes[pick(c)].cost;
          muls += m.nodes[pick(c)].is_mul;
        }
      if (!best.feasible || cost < best.cost - 1e-9 ||
          (cost < best.cost + 1e-9 && muls < best.muls)) {
        best.feasible = true;
        best.cost = cost;
        best.muls = muls;
      }
    }
    std::size_t i = 0;
    while (i < digit.size() && ++digit[i] == members[classes[i]].size()) digit[i++] = 0;
    if (i == digit.size()) break;
  }
  return best;
}

// Seeded stream of models small enough for brute_force.
inline std::vector<IlpModel> instances(std::uint64_t seed, std::size_t count, double max_space) {
  std::mt19937_64 rng(seed);
  std::vector<IlpModel> out;
  while (out.size() < count) {
    std::size_t n = 1 + rng() % 30;
    IlpModel m = random_model(rng, n, 3);
    if (search_space(m) <= max_space) out.push_back(std::move(m));
  }
  return out;
}

}  // namespace randilp
