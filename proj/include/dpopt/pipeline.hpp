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
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "dpopt/cost.hpp"
#include "dpopt/egraph.hpp"
#include "dpopt/extract.hpp"
#include "dpopt/ir.hpp"
#include "dpopt/rules.hpp"
#include "dpopt/verify.hpp"

namespace dpopt {

enum class ExtractBackend { Greedy, Ilp };
/// Auto: exhaustive up to kExhaustiveBitLimit input bits, sampled above.
enum class CheckMode { Auto, Exhaustive, Sampled, None };
enum class EmitFormat { Sexpr, Netlist, Json };

std::string_view backend_name(ExtractBackend b);
std::string_view check_mode_name(CheckMode m);

struct RunConfig {
  std::string input_path;                // either this ...
  std::string bench;                     // ... or a registry name
  std::optional<Width> param;            // width parameter of the benchmark
  std::optional<std::set<RuleClass>> rules;  // unset: defaults for the design
  RunLimits limits;
  ExtractBackend extract = ExtractBackend::Ilp;
  std::int64_t ilp_budget_ms = 100000;
  CheckMode check = CheckMode::Auto;
  std::uint64_t samples = 100000;
  CostConfig cost;
  std::string cost_config_path;  // echoed in the report only
  std::uint64_t seed = 1;
  EmitFormat emit = EmitFormat::Sexpr;

  void validate() const;
  /// Rule classes that will actually run.
  std::set<RuleClass> effective_rules() const;
};

/// An error raised inside one pipeline phase.
class PhaseError : public Error {
 public:
  PhaseError(std::string phase, const std::string &what)
      : Error(phase + ": " + what), phase_(std::move(phase)) {}
  const std::string &phase() const { return phase_; }

 private:
  std::string phase_;
};

struct RunArtifacts {
  Design original;
  Design optimized;
  RunReport saturation;
  std::size_t egraph_nodes = 0;
  std::size_t egraph_classes = 0;
  double original_cost = 0;
  double optimized_cost = 0;
  double extracted_cost = 0;  // before the keep-the-original fallback
  bool kept_original = false;
  ExtractBackend backend = ExtractBackend::Ilp;
  std::optional<IlpStatus> ilp_status;
  std::uint64_t ilp_explored = 0;
  std::size_t selected_classes = 0;
  std::optional<EquivVerdict> verdict;
  std::vector<std::pair<std::string, double>> timings_ms;
  std::string fingerprint;
};

Design load_design(const RunConfig &cfg);
RunArtifacts run_pipeline(const RunConfig &cfg);

/// Width- and constant-erased structural hash of a design's DAG.
std::string fingerprint(const Design &d);

/// Number of nodes of each operator in the design's DAG.
std::map<std::string, std::size_t> op_histogram(const Design &d);

struct SweepPoint {
  Width value = 0;
  std::optional<RunArtifacts> result;
  std::string error;
  std::string fingerprint;
};

/// Runs the pipeline for param = start, start+step, ..., <= stop. Errors are
/// recorded per point.
std::vector<SweepPoint> run_sweep(const RunConfig &base, Width start, Width stop, Width step);

nlohmann::json report_json(const RunConfig &cfg, const RunArtifacts &a,
                           bool include_timings = true);
nlohmann::json sweep_json(const RunConfig &cfg, const std::vector<SweepPoint> &points);
nlohmann::json rules_json(const std::vector<RewriteRule> &rules);

}  // namespace dpopt
