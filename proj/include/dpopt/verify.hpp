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
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "dpopt/ir.hpp"
#include "dpopt/rules.hpp"

namespace dpopt {

struct EquivVerdict {
  enum class Status { Equivalent, Counterexample, Inconclusive };
  enum class Mode { Exhaustive, Sampled };

  Status status = Status::Inconclusive;
  Mode mode = Mode::Exhaustive;
  std::optional<Env> counterexample;
  std::uint64_t cases_checked = 0;
  /// Output that differed and its two values, when there is a counterexample.
  std::string output;
  Value lhs_value = 0;
  Value rhs_value = 0;

  bool equivalent() const { return status == Status::Equivalent; }
};

std::string_view verdict_status_name(EquivVerdict::Status s);
std::string_view verdict_mode_name(EquivVerdict::Mode m);

inline constexpr unsigned kExhaustiveBitLimit = 20;

/// Compares every output over all 2^bits input environments. Throws if the
/// designs disagree on inputs or outputs, or if bits > kExhaustiveBitLimit.
EquivVerdict equiv_exhaustive(const Design &a, const Design &b);

/// Corner cases (all zero, all ones, every single set bit) followed by `n`
/// pseudorandom environments drawn from `seed`.
EquivVerdict equiv_sampled(const Design &a, const Design &b, std::uint64_t n,
                           std::uint64_t seed);

struct RuleFailure {
  std::map<std::string, Width> widths;
  std::map<std::string, Value> constants;
  Env inputs;
  Value lhs = 0;
  Value rhs = 0;
  std::string note;
};

struct RuleCheckReport {
  std::string rule;
  std::uint64_t assignments_tried = 0;
  std::uint64_t assignments_passing = 0;  // condition held and was checked
  std::uint64_t vacuous = 0;              // a synthesized width left [1, 64]
  std::uint64_t cases_checked = 0;
  std::vector<RuleFailure> failures;
  std::vector<std::string> minimality_failures;

  bool ok() const { return failures.empty() && minimality_failures.empty(); }
};

/// Replays the rule at every assignment of its left-hand width variables in
/// {1..max_width} (plus every value of constant-matched terms). Designs whose
/// inputs total more than `input_bit_budget` bits are sampled 10^4 times.
RuleCheckReport check_rule_soundness(const RewriteRule &rule, Width max_width,
                                     unsigned input_bit_budget, std::uint64_t seed = 1);

/// Distribute Mult over Add with its width condition removed. The harness
/// must reject it.
RewriteRule corrupted_distribute_rule();

/// The two concrete designs a rule instance relates; exposed for tests.
struct RuleInstance {
  Design lhs;
  Design rhs;
};
RuleInstance instantiate_rule(const RewriteRule &rule, const Substitution &s,
                              const std::vector<Width> &tail_widths = {});

nlohmann::json to_json(const EquivVerdict &v);
nlohmann::json to_json(const RuleCheckReport &r);

}  // namespace dpopt
