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

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dpopt/egraph.hpp"
#include "dpopt/ir.hpp"

namespace dpopt {

/// Gate-count constants of the area model. Every cost is a sum of terms
/// linear in exactly one of the gate constants, optionally multiplied by the
/// dimensionless const_discount.
struct CostConfig {
  double pa_base = 3.0;
  double pa_log = 1.0;
  double fa_row_gate = 4.0;
  double booth_pp = 1.5;
  double mux_gate = 3.0;
  double not_gate = 0.5;
  double neg_gate = 2.0;
  double const_discount = 0.5;

  /// Parses `key = value` lines; `#` starts a comment. Unknown keys and
  /// negative or non-finite values are errors.
  static CostConfig from_text(const std::string &text);
  static CostConfig load(const std::string &path);
  std::string to_text() const;
  std::vector<std::pair<std::string, double>> items() const;

  /// Multiplies every gate constant by `k`; const_discount is a ratio and stays.
  CostConfig scaled(double k) const;

  bool operator==(const CostConfig &) const = default;
};

struct Operand {
  Width width = 1;
  std::optional<Value> constant;
};

struct NodeCostQuery {
  Op op;
  Width out_width;
  std::vector<Operand> operands;
};

double op_cost(const NodeCostQuery &q, const CostConfig &cfg);

/// Number of nonzero digits in the canonical signed-digit form of `v`.
int csd_digits(Value v);

double prefix_adder_cost(Width w, const CostConfig &cfg);
double fa_row_cost(Width w, const CostConfig &cfg);

/// Cost of one e-node with operand constants taken from the class analysis.
double node_cost(const EGraph &g, const ENode &n, const CostConfig &cfg);
/// Sum over the distinct nodes of the design's DAG.
double design_cost(const Design &d, const CostConfig &cfg);
/// Sum over a set of queries, one entry per distinct selected node.
double dag_cost(std::span<const NodeCostQuery> nodes, const CostConfig &cfg);

}  // namespace dpopt
