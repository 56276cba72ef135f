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
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <sstream>
#include <unordered_map>

#include "dpopt/extract.hpp"

namespace dpopt {

std::string_view ilp_status_name(IlpStatus s) {
  switch (s) {
    case IlpStatus::Optimal: return "optimal";
    case IlpStatus::Feasible: return "feasible";
    case IlpStatus::Infeasible: return "infeasible";
    case IlpStatus::Timeout: return "timeout";
  }
  return "unknown";
}

IlpModel build_ilp(const EGraph &g, const std::vector<ClassId> &roots, const CostConfig &cfg) {
  IlpModel m;
  std::set<ClassId> seen;
  std::vector<ClassId> stack;
  for (ClassId r : roots) {
    r = g.find(r);
    if (std::find(m.roots.begin(), m.roots.end(), r) == m.roots.end()) m.roots.push_back(r);
    stack.push_back(r);
  }
  while (!stack.empty()) {
    ClassId c = stack.back();
    stack.pop_back();
    if (!seen.insert(c).second) continue;
    for (const ENode &n : g.eclass(c).nodes)
      for (ClassId k : n.children) stack.push_back(g.find(k));
  }
  m.classes.assign(seen.begin(), seen.end());
  for (ClassId c : m.classes) {
    for (const ENode &raw : g.eclass(c).nodes) {
      ENode n = g.canonicalize(raw);
      std::vector<ClassId> kids = n.children;
      std::sort(kids.begin(), kids.end());
      kids.erase(std::unique(kids.begin(), kids.end()), kids.end());
      double cost = node_cost(g, n, cfg);
      bool is_mul = n.op == Op::Mul;
      m.nodes.push_back(IlpModel::Node{c, std::move(n), cost, is_mul, std::move(kids)});
    }
  }
  return m;
}

namespace {

std::string xv(std::size_t i) { return "x_" + std::to_string(i); }
std::string tv(ClassId c) { return "t_" + std::to_string(c); }

std::string fmt(double v) {
  std::ostringstream s;
  s.precision(17);
  s << v;
  return s.str();
}

}  // namespace

void IlpModel::for_each_constraint(const std::function<void(const Constraint &)> &fn) const {
  std::map<ClassId, std::vector<std::size_t>> members;
  for (std::size_t i = 0; i < nodes.size(); ++i) members[nodes[i].eclass].push_back(i);

  for (std::size_t i = 0; i < nodes.size(); ++i)
    for (ClassId k : nodes[i].child_classes) {
      Constraint c{"child_" + std::to_string(i) + "_" + std::to_string(k), {{1, xv(i)}}, "<=", 0};
      for (std::size_t j : members[k]) c.terms.push_back({-1, xv(j)});
      fn(c);
    }
  for (ClassId r : roots) {
    Constraint c{"root_" + std::to_string(r), {}, "=", 1};
    for (std::size_t j : members[r]) c.terms.push_back({1, xv(j)});
    fn(c);
  }
  const double n = big_n();
  for (std::size_t i = 0; i < nodes.size(); ++i)
    for (ClassId k : nodes[i].child_classes) {
      Constraint c{"acyc_" + std::to_string(i) + "_" + std::to_string(k), {}, ">=", 1 - n};
      if (k == nodes[i].eclass) {
        c.terms = {{-n, xv(i)}};
      } else {
        c.terms = {{1, tv(nodes[i].eclass)}, {-n, xv(i)}, {-1, tv(k)}};
      }
      fn(c);
    }
}

std::vector<IlpModel::Constraint> IlpModel::constraints() const {
  std::vector<Constraint> out;
  for_each_constraint([&](const Constraint &c) { out.push_back(c); });
  return out;
}

std::string export_lp(const IlpModel &m) {
  std::ostringstream out;
  out << "\\ e-graph extraction: " << m.nodes.size() << " nodes, " << m.classes.size()
      << " classes\n";
  out << "Minimize\n obj:";
  bool any = false;
  for (std::size_t i = 0; i < m.nodes.size(); ++i) {
    if (m.nodes[i].cost == 0) continue;
    out << (any ? " + " : " ") << fmt(m.nodes[i].cost) << " " << xv(i);
    any = true;
  }
  if (!any) out << " 0 " << (m.nodes.empty() ? std::string("dummy") : xv(0));
  out << "\nSubject To\n";
  m.for_each_constraint([&](const IlpModel::Constraint &c) {
    out << " " << c.name << ":";
    if (c.terms.empty()) out << " 0 " << (m.nodes.empty() ? std::string("dummy") : xv(0));
    bool first = true;
    for (const auto &t : c.terms) {
      double a = t.coef;
      if (first)
        out << (a < 0 ? " -" : " ");
      else
        out << (a < 0 ? " - " : " + ");
      out << fmt(std::fabs(a)) << " " << t.var;
      first = false;
    }
    out << " " << c.sense << " " << fmt(c.rhs) << "\n";
  });
  out << "Bounds\n";
  if (m.nodes.empty()) out << " dummy = 0\n";
  for (ClassId c : m.classes) out << " 0 <= " << tv(c) << " <= " << fmt(std::max(0.0, m.big_n() - 1)) << "\n";
  out << "Binary\n";
  for (std::size_t i = 0; i < m.nodes.size(); ++i) out << " " << xv(i) << "\n";
  if (!m.classes.empty()) {
    out << "General\n";
    for (ClassId c : m.classes) out << " " << tv(c) << "\n";
  }
  out << "End\n";
  return out.str();
}

namespace {

constexpr double kEps = 1e-9;

class BranchAndBound {
 public:
  BranchAndBound(const IlpModel &m, std::int64_t budget_ms)
      : m_(m), budget_ms_(budget_ms), start_(std::chrono::steady_clock::now()) {
    for (std::size_t i = 0; i < m.classes.size(); ++i) index_[m.classes[i]] = i;
    const std::size_t n = m.classes.size();
    cands_.resize(n);
    min_own_.assign(n, std::numeric_limits<double>::infinity());
    for (std::size_t i = 0; i < m.nodes.size(); ++i) {
      std::size_t c = index_.at(m.nodes[i].eclass);
      cands_[c].push_back(i);
      min_own_[c] = std::min(min_own_[c], m.nodes[i].cost);
      std::vector<std::size_t> kids;
      for (ClassId k : m.nodes[i].child_classes) kids.push_back(index_.at(k));
      kids_.push_back(std::move(kids));
    }
    compute_tree_costs();
    assign_.assign(n, -1);
    in_frontier_.assign(n, false);
  }

  IlpResult run() {
    IlpResult res;
    for (ClassId r : m_.roots)
      if (cands_[index_.at(r)].empty()) {
        res.status = IlpStatus::Infeasible;
        return res;
      }
    seed_incumbent();
    for (ClassId r : m_.roots) push_frontier(index_.at(r));
    dfs();
    res.explored = explored_;
    res.elapsed_ms = elapsed_ms();
    if (have_best_) {
      res.selection = to_selection(best_assign_);
      res.cost = best_cost_;
      res.mul_count = best_muls_;
      res.status = timed_out_ ? IlpStatus::Feasible : IlpStatus::Optimal;
    } else {
      res.status = timed_out_ ? IlpStatus::Timeout : IlpStatus::Infeasible;
    }
    return res;
  }

 private:
  double elapsed_ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_)
        .count();
  }

  // Bottom-up tree costs, used to order candidates and seed the incumbent.
  void compute_tree_costs() {
    const double inf = std::numeric_limits<double>::infinity();
    tree_.assign(m_.classes.size(), inf);
    tree_pick_.assign(m_.classes.size(), -1);
    bool changed = true;
    while (changed) {
      changed = false;
      for (std::size_t i = 0; i < m_.nodes.size(); ++i) {
        double c = m_.nodes[i].cost;
        for (std::size_t k : kids_[i]) c += tree_[k];
        std::size_t cls = index_.at(m_.nodes[i].eclass);
        if (c < tree_[cls] - kEps) {
          tree_[cls] = c;
          tree_pick_[cls] = static_cast<long>(i);
          changed = true;
        }
      }
    }
  }

  void seed_incumbent() {
    std::vector<long> pick(m_.classes.size(), -1);
    std::vector<std::size_t> stack;
    for (ClassId r : m_.roots) stack.push_back(index_.at(r));
    while (!stack.empty()) {
      std::size_t c = stack.back();
      stack.pop_back();
      if (pick[c] >= 0) continue;
      if (tree_pick_[c] < 0) return;
      pick[c] = tree_pick_[c];
      for (std::size_t k : kids_[static_cast<std::size_t>(pick[c])]) stack.push_back(k);
    }
    double cost = 0;
    std::size_t muls = 0;
    for (long p : pick)
      if (p >= 0) {
        cost += m_.nodes[static_cast<std::size_t>(p)].cost;
        muls += m_.nodes[static_cast<std::size_t>(p)].is_mul;
      }
    record(pick, cost, muls);
  }

  void record(const std::vector<long> &assign, double cost, std::size_t muls) {
    if (have_best_ && (cost > best_cost_ + kEps ||
                       (cost > best_cost_ - kEps && muls >= best_muls_)))
      return;
    have_best_ = true;
    best_cost_ = cost;
    best_muls_ = muls;
    best_assign_ = assign;
  }

  void push_frontier(std::size_t c) {
    if (assign_[c] >= 0 || in_frontier_[c]) return;
    in_frontier_[c] = true;
    frontier_.push_back(c);
    frontier_lb_ += min_own_[c];
  }

  // True if class `to` is reachable from `from` along assigned choices.
  bool reaches(std::size_t from, std::size_t to) {
    ++stamp_;
    if (mark_.size() < m_.classes.size()) mark_.assign(m_.classes.size(), 0);
    std::vector<std::size_t> stack{from};
    while (!stack.empty()) {
      std::size_t c = stack.back();
      stack.pop_back();
      if (c == to) return true;
      if (mark_[c] == stamp_) continue;
      mark_[c] = stamp_;
      if (assign_[c] < 0) continue;
      for (std::size_t k : kids_[static_cast<std::size_t>(assign_[c])]) stack.push_back(k);
    }
    return false;
  }

  bool prune(double lb, std::size_t muls) const {
    if (!have_best_) return false;
    if (lb > best_cost_ + kEps) return true;
    return lb > best_cost_ - kEps && muls >= best_muls_;
  }

  void dfs() {
    if (timed_out_) return;
    if ((++explored_ & 1023) == 0 && budget_ms_ > 0 && elapsed_ms() > budget_ms_) {
      timed_out_ = true;
      return;
    }
    if (frontier_.empty()) {
      record(assign_, cost_, muls_);
      return;
    }
    // branch on the frontier class with the fewest alternatives
    std::size_t pos = 0;
    for (std::size_t i = 1; i < frontier_.size(); ++i)
      if (cands_[frontier_[i]].size() < cands_[frontier_[pos]].size()) pos = i;
    const std::size_t cls = frontier_[pos];
    frontier_[pos] = frontier_.back();
    frontier_.pop_back();
    in_frontier_[cls] = false;
    frontier_lb_ -= min_own_[cls];

    std::vector<std::pair<double, std::size_t>> order;
    for (std::size_t i : cands_[cls]) {
      double key = m_.nodes[i].cost;
      for (std::size_t k : kids_[i])
        if (assign_[k] < 0 && k != cls) key += tree_[k];
      order.emplace_back(key, i);
    }
    std::sort(order.begin(), order.end(), [&](const auto &a, const auto &b) {
      if (a.first != b.first) return a.first < b.first;
      if (m_.nodes[a.second].is_mul != m_.nodes[b.second].is_mul)
        return m_.nodes[b.second].is_mul;
      return a.second < b.second;
    });

    for (const auto &[key, i] : order) {
      if (timed_out_) break;
      bool cyclic = false;
      for (std::size_t k : kids_[i])
        if (k == cls || reaches(k, cls)) {
          cyclic = true;
          break;
        }
      if (cyclic) continue;
      const IlpModel::Node &node = m_.nodes[i];
      assign_[cls] = static_cast<long>(i);
      cost_ += node.cost;
      muls_ += node.is_mul;
      const std::size_t saved_size = frontier_.size();
      const double saved_lb = frontier_lb_;
      for (std::size_t k : kids_[i]) push_frontier(k);
      if (!prune(cost_ + frontier_lb_, muls_)) dfs();
      while (frontier_.size() > saved_size) {
        in_frontier_[frontier_.back()] = false;
        frontier_.pop_back();
      }
      frontier_lb_ = saved_lb;
      cost_ -= node.cost;
      muls_ -= node.is_mul;
      assign_[cls] = -1;
    }

    frontier_.push_back(cls);
    std::swap(frontier_[pos], frontier_.back());
    in_frontier_[cls] = true;
    frontier_lb_ += min_own_[cls];
  }

  Selection to_selection(const std::vector<long> &assign) const {
    Selection sel;
    sel.roots = m_.roots;
    for (std::size_t c = 0; c < assign.size(); ++c)
      if (assign[c] >= 0)
        sel.chosen.emplace(m_.classes[c], m_.nodes[static_cast<std::size_t>(assign[c])].node);
    return sel;
  }

  const IlpModel &m_;
  std::int64_t budget_ms_;
  std::chrono::steady_clock::time_point start_;
  std::unordered_map<ClassId, std::size_t> index_;
  std::vector<std::vector<std::size_t>> cands_;
  std::vector<std::vector<std::size_t>> kids_;
  std::vector<double> min_own_;
  std::vector<double> tree_;
  std::vector<long> tree_pick_;

  std::vector<long> assign_;
  std::vector<bool> in_frontier_;
  std::vector<std::size_t> frontier_;
  double frontier_lb_ = 0;
  double cost_ = 0;
  std::size_t muls_ = 0;

  std::vector<std::uint64_t> mark_;
  std::uint64_t stamp_ = 0;

  bool have_best_ = false;
  double best_cost_ = 0;
  std::size_t best_muls_ = 0;
  std::vector<long> best_assign_;
  std::uint64_t explored_ = 0;
  bool timed_out_ = false;
};

}  // namespace

IlpResult solve_ilp(const IlpModel &m, std::int64_t budget_ms) {
  IlpResult r = BranchAndBound(m, budget_ms).run();
  if (r.status == IlpStatus::Optimal || r.status == IlpStatus::Feasible) {
    if (auto why = check_ilp_solution(m, r.selection); !why.empty())
      throw Error("ILP solution violates its model: " + why);
  }
  return r;
}

std::string check_ilp_solution(const IlpModel &m, const Selection &sel) {
  // Evaluates the model's constraints on the 0/1 point induced by `sel`
  // without materializing them; the child rows alone are quadratic in the
  // class sizes of a saturated graph.
  if (auto why = check_selection(sel); !why.empty()) return why;
  std::vector<char> x(m.nodes.size(), 0);
  std::map<ClassId, int> chosen_in;
  for (std::size_t i = 0; i < m.nodes.size(); ++i) {
    auto it = sel.chosen.find(m.nodes[i].eclass);
    x[i] = it != sel.chosen.end() && it->second == m.nodes[i].node;
    if (x[i]) ++chosen_in[m.nodes[i].eclass];
  }
  // t = height of the class in the selected DAG
  std::map<ClassId, double> height;
  std::function<double(ClassId)> h = [&](ClassId c) -> double {
    if (auto it = height.find(c); it != height.end()) return it->second;
    double v = 0;
    auto it = sel.chosen.find(c);
    if (it != sel.chosen.end())
      for (ClassId k : it->second.children) v = std::max(v, h(k) + 1);
    height[c] = v;
    return v;
  };
  const double n = m.big_n();
  for (std::size_t i = 0; i < m.nodes.size(); ++i)
    for (ClassId k : m.nodes[i].child_classes) {
      const std::string tag = std::to_string(i) + "_" + std::to_string(k);
      if (x[i] > chosen_in[k]) return "constraint child_" + tag + " violated";
      double lhs = k == m.nodes[i].eclass ? -n * x[i] : h(m.nodes[i].eclass) - n * x[i] - h(k);
      if (lhs < 1 - n - kEps) return "constraint acyc_" + tag + " violated";
    }
  for (ClassId r : m.roots)
    if (chosen_in[r] != 1) return "constraint root_" + std::to_string(r) + " violated";
  for (ClassId c : m.classes)
    if (h(c) > std::max(0.0, n - 1)) return "t out of bounds";
  return "";
}

}  // namespace dpopt
