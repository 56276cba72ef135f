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
#include <string>
#include <vector>

#include "dpopt/ir.hpp"

namespace dpopt {

struct BenchmarkInfo {
  std::string name;
  std::string description;
  bool parameterized = false;  // takes an input-width parameter
  Width default_param = 0;
  bool const_expansion = false;  // constant expansion enabled by default
};

const std::vector<BenchmarkInfo> &benchmark_registry();
const BenchmarkInfo &benchmark_info(const std::string &name);

/// Builds a registry design. `param` sets the data width of parameterized
/// benchmarks and must be absent for the others.
Design benchmark(const std::string &name, std::optional<Width> param = std::nullopt);

/// Outputs `c * x` for every coefficient, at the exact product width.
Design mcm_design(const std::vector<Value> &coeffs, Width x_width = 8);

}  // namespace dpopt
