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

#include "dpopt/egraph.hpp"

#include <unordered_set>

namespace dpopt {

std::size_t ENodeHash::operator()(const ENode &n) const {
  std::size_t h = static_cast<std::size_t>(n.op) * 0x9e3779b97f4a7c15ULL;
  auto mix = [&h](std::size_t v) { h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2); };
  mix(n.width);
  mix(std::hash<Value>{}(n.value));
  for (ClassId c : n.children) mix(c);
  if (!n.name.empty()) mix(std::hash<std::string>{}(n.name));
  return h;
}

std::string_view stop_reason_name(StopReason r) {
  switch (r) {
    case StopReason::Saturated: return "saturated";
    case StopReason::IterationLimit: return "iteration_limit";
    case StopReason::NodeLimit: return "node_limit";
    case StopReason::TimeLimit: return "time_limit";
    case StopReason::MatchLimit: return "match_limit";
  }
  return "unknown";
}

ClassId EGraph::find(ClassId id) const {
  auto &parent = const_cast<std::vector<ClassId> &>(parent_);
  while (parent[id] != id) {
    parent[id] = parent[parent[id]];
    id = parent[id];
  }
  return id;
}

ENode EGraph::canonicalize(ENode n) const {
  for (auto &c : n.children) c = find(c);
  return n;
}

std::optional<ClassId> EGraph::lookup(const ENode &n) const {
  auto it = memo_.find(canonicalize(n));
  if (it == memo_.end()) return std::nullopt;
  return find(it->second);
}

std::optional<Value> EGraph::fold(const ENode &n) const {
  if (n.op == Op::Const) return n.value;
  if (n.op == Op::Var) return std::nullopt;
  std::vector<Value> vals;
  std::vector<Width> widths;
  for (ClassId c : n.children) {
    const auto &d = data(c);
    if (!d.constant) return std::nullopt;
    vals.push_back(*d.constant);
    widths.push_back(d.width);
  }
  return apply_op(n.op, n.width, vals, widths);
}

ClassId EGraph::add(ENode node) {
  check_width(node.width);
  node = canonicalize(std::move(node));
  if (auto it = memo_.find(node); it != memo_.end()) return find(it->second);
  if (node_count_ >= max_nodes_)
    throw NodeLimitError("e-graph node limit of " + std::to_string(max_nodes_) +
                         " reached");
  for (ClassId c : node.children)
    if (find(c) >= classes_.size()) throw Error("add: dangling child class");

  ClassId id = static_cast<ClassId>(classes_.size());
  std::optional<Value> k = fold(node);
  parent_.push_back(id);
  classes_.push_back(EClass{id, {node}, ClassAnalysis{node.width, k}});
  memo_.emplace(std::move(node), id);
  ++node_count_;
  ++live_classes_;
  ++version_;
  if (k && classes_[id].nodes.front().op != Op::Const) set_constant(id, *k);
  return find(id);
}

void EGraph::set_constant(ClassId id, Value v) {
  ClassId k = add(ENode{Op::Const, width(id), {}, v, {}});
  merge(id, k);
}

ClassId EGraph::add_expr(const ExprPtr &e) {
  std::unordered_map<const Expr *, ClassId> ids;
  for (const Expr *n : topo_order(e)) {
    ENode node{n->op, n->width, {}, n->value, n->name};
    for (const auto &c : n->children) node.children.push_back(ids.at(c.get()));
    ids[n] = add(std::move(node));
  }
  return find(ids.at(e.get()));
}

ClassId EGraph::merge(ClassId a, ClassId b) {
  a = find(a);
  b = find(b);
  if (a == b) return a;
  EClass &ca = classes_[a];
  EClass &cb = classes_[b];
  if (ca.data.width != cb.data.width)
    throw AnalysisConflict("cannot merge classes of width " +
                           std::to_string(ca.data.width) + " and " +
                           std::to_string(cb.data.width));
  if (ca.data.constant && cb.data.constant && *ca.data.constant != *cb.data.constant)
    throw AnalysisConflict("merging classes with constants " +
                           std::to_string(*ca.data.constant) + " and " +
                           std::to_string(*cb.data.constant));
  ClassId root = std::min(a, b);
  ClassId other = std::max(a, b);
  EClass &r = classes_[root];
  EClass &o = classes_[other];
  parent_[other] = root;
  if (!r.data.constant) r.data.constant = o.data.constant;
  r.nodes.insert(r.nodes.end(), std::make_move_iterator(o.nodes.begin()),
                 std::make_move_iterator(o.nodes.end()));
  o.nodes.clear();
  --live_classes_;
  ++version_;
  pending_.push_back(root);
  return root;
}

void EGraph::rebuild() {
  bool changed = true;
  while (changed) {
    changed = false;
    memo_.clear();
    std::vector<std::pair<ClassId, ClassId>> unions;
    for (ClassId id : class_ids()) {
      for (const ENode &n : classes_[id].nodes) {
        ENode c = canonicalize(n);
        auto [it, inserted] = memo_.emplace(std::move(c), id);
        if (!inserted && find(it->second) != id) unions.emplace_back(it->second, id);
      }
    }
    for (auto [a, b] : unions)
      if (find(a) != find(b)) {
        merge(a, b);
        changed = true;
      }

    // constant analysis, re-propagated until no class learns a new value
    std::vector<std::pair<ClassId, Value>> learned;
    for (ClassId id : class_ids()) {
      const EClass &cls = classes_[id];
      for (const ENode &n : cls.nodes) {
        auto k = fold(canonicalize(n));
        if (!k) continue;
        if (cls.data.constant && *cls.data.constant != *k)
          throw AnalysisConflict("class " + std::to_string(id) + " folds to both " +
                                 std::to_string(*cls.data.constant) + " and " +
                                 std::to_string(*k));
        if (!cls.data.constant) {
          learned.emplace_back(id, *k);
          break;
        }
      }
    }
    for (auto [id, v] : learned) {
      ClassId r = find(id);
      if (classes_[r].data.constant) continue;
      classes_[r].data.constant = v;
      set_constant(r, v);
      changed = true;
    }
  }

  node_count_ = 0;
  memo_.clear();
  for (ClassId id : class_ids()) {
    auto &nodes = classes_[id].nodes;
    std::unordered_set<ENode, ENodeHash> seen;
    std::vector<ENode> kept;
    for (auto &n : nodes) {
      ENode c = canonicalize(std::move(n));
      if (seen.insert(c).second) kept.push_back(std::move(c));
    }
    nodes = std::move(kept);
    node_count_ += nodes.size();
    for (const auto &n : nodes) memo_.emplace(n, id);
  }
  pending_.clear();
}

std::vector<ClassId> EGraph::class_ids() const {
  std::vector<ClassId> out;
  out.reserve(live_classes_);
  for (ClassId i = 0; i < classes_.size(); ++i)
    if (parent_[i] == i) out.push_back(i);
  return out;
}

}  // namespace dpopt
