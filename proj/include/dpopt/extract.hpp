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
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "dpopt/cost.hpp"
#include "dpopt/egraph.hpp"

namespace dpopt {

/// One chosen e-node per needed class. Child ids are canonical.
struct Selection {
  std::map<ClassId, ENode> chosen;
  std::vector<ClassId> roots;
};

/// Raised when no acyclic implementation exists for a root.
class ExtractionError : public Error {
 public:
  using Error::Error;
};

Selection extract_greedy(const EGraph &g, const std::vector<ClassId> &roots,
                         const CostConfig &cfg);

/// Closure, root coverage and acyclicity. Returns an empty string when valid.
std::string check_selection(const Selection &sel);
/// Sum of node costs over the distinct classes reachable from the roots.
double selection_cost(const EGraph &g, const Selection &sel, const CostConfig &cfg);
std::size_t selection_mul_count(const Selection &sel);

/// One Expr per selected class; outputs are named `names[i]` for roots[i].
Design selection_to_design(const Selection &sel, const EGraph &g,
                           const std::vector<std::pair<std::string, Width>> &inputs,
                           const std::vector<std::string> &names);

/// 0-1 program over e-node choice variables x and class order variables t.
struct IlpModel {
  struct Node {
    ClassId eclass;
    ENode node;
    double cost;
    bool is_mul;
    std::vector<ClassId> child_classes;  // distinct, canonical
  };
  std::vector<Node> nodes;       // x_i refers to nodes[i]
  std::vector<ClassId> classes;  // every class reachable from the roots, sorted
  std::vector<ClassId> roots;    // distinct, canonical

  struct Term {
    double coef;
    std::string var;
  };
  struct Constraint {
    std::string name;
    std::vector<Term> terms;
    std::string sense;  // "<=", ">=", "="
    double rhs;
  };
  /// Child, root and acyclicity constraints in a fixed order.
  std::vector<Constraint> constraints() const;
  void for_each_constraint(const std::function<void(const Constraint &)> &fn) const;
  double big_n() const { return static_cast<double>(classes.size()); }
};

IlpModel build_ilp(const EGraph &g, const std::vector<ClassId> &roots,
                   const CostConfig &cfg);

enum class IlpStatus { Optimal, Feasible, Infeasible, Timeout };
std::string_view ilp_status_name(IlpStatus s);

struct IlpResult {
  IlpStatus status = IlpStatus::Infeasible;
  Selection selection;
  double cost = 0;
  std::size_t mul_count = 0;
  std::uint64_t explored = 0;
  double elapsed_ms = 0;
};

/// Depth-first branch and bound. Among equal-cost optima the selection with
/// fewer multipliers wins. Budget <= 0 means unlimited.
IlpResult solve_ilp(const IlpModel &m, std::int64_t budget_ms);

/// Evaluates every model constraint for a selection, with t set to each
/// class's height in the selected DAG. Empty string when all hold.
std::string check_ilp_solution(const IlpModel &m, const Selection &sel);

/// CPLEX LP text. Variables are x_<i> for nodes[i] and t_<classid>.
std::string export_lp(const IlpModel &m);

}  // namespace dpopt
