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

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "dpopt/ir.hpp"

namespace dpopt {

using ClassId = std::uint32_t;
inline constexpr ClassId kNoClass = ~ClassId{0};

struct ENode {
  Op op;
  Width width;
  std::vector<ClassId> children;
  Value value = 0;
  std::string name;

  bool operator==(const ENode &) const = default;
};

struct ENodeHash {
  std::size_t operator()(const ENode &n) const;
};

/// Per-class analysis: width plus the folded constant, when known.
struct ClassAnalysis {
  Width width = 0;
  std::optional<Value> constant;
};

struct EClass {
  ClassId id = kNoClass;
  std::vector<ENode> nodes;
  ClassAnalysis data;
};

/// Raised when an add would push the graph past its node budget.
class NodeLimitError : public Error {
 public:
  using Error::Error;
};

/// Raised when two classes disagree on width or folded constant. Either one
/// means a rewrite produced an unsound equality.
class AnalysisConflict : public Error {
 public:
  using Error::Error;
};

class EGraph {
 public:
  explicit EGraph(std::size_t max_nodes = 100000) : max_nodes_(max_nodes) {}

  ClassId add(ENode node);
  ClassId add_expr(const ExprPtr &e);

  ClassId find(ClassId id) const;
  ClassId merge(ClassId a, ClassId b);
  void rebuild();

  const EClass &eclass(ClassId id) const { return classes_[find(id)]; }
  const ClassAnalysis &data(ClassId id) const { return eclass(id).data; }
  Width width(ClassId id) const { return eclass(id).data.width; }
  std::optional<Value> constant(ClassId id) const { return eclass(id).data.constant; }

  /// Canonical class ids in insertion order.
  std::vector<ClassId> class_ids() const;
  std::size_t class_count() const { return live_classes_; }
  std::size_t node_count() const { return node_count_; }
  std::size_t max_nodes() const { return max_nodes_; }
  void set_max_nodes(std::size_t n) { max_nodes_ = n; }

  ENode canonicalize(ENode n) const;
  /// Class holding `n` (after canonicalization), if represented.
  std::optional<ClassId> lookup(const ENode &n) const;

  /// Bumped on every new e-node and every effective union.
  std::uint64_t version() const { return version_; }
  bool clean() const { return pending_.empty(); }

 private:
  std::optional<Value> fold(const ENode &n) const;
  void set_constant(ClassId id, Value v);

  std::vector<ClassId> parent_;
  std::vector<EClass> classes_;
  std::unordered_map<ENode, ClassId, ENodeHash> memo_;
  std::vector<ClassId> pending_;
  std::size_t max_nodes_;
  std::size_t node_count_ = 0;
  std::size_t live_classes_ = 0;
  std::uint64_t version_ = 0;
};

enum class StopReason { Saturated, IterationLimit, NodeLimit, TimeLimit, MatchLimit };
std::string_view stop_reason_name(StopReason r);

struct RunLimits {
  int max_iterations = 10;
  std::size_t max_nodes = 100000;
  std::int64_t time_budget_ms = 60000;
  // pending rewrites collected in one iteration; bounds memory on graphs
  // where a few associative rules match combinatorially often
  std::size_t max_matches = 1000000;
};

struct RunReport {
  int iterations_run = 0;
  std::vector<std::size_t> node_counts;   // after each iteration
  std::vector<std::size_t> class_counts;  // after each iteration
  std::vector<std::size_t> applications;  // effective rewrite applications
  std::size_t skipped_cap = 0;            // matches whose free widths exceed 64
  bool saturated = false;
  StopReason stop_reason = StopReason::IterationLimit;
};

}  // namespace dpopt
