// Copyright 2026 The Combkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <vector>

#include "combkit/verify.hpp"

namespace combkit {

struct SuiteConfig {
  std::vector<int> dims = {2, 3};
  std::uint64_t seed = 42;
  int mc_samples = 10000;
  double tol_exact = 1e-9;
  double tol_sigma = 5.0;
  bool run_oracles = true;  // brute-force cross-checks at d=2
};

// Runs the golden-number suite: every protocol's closed form against its
// exact evaluation and Monte-Carlo estimate, one report per protocol/dim.
std::vector<VerificationReport> run_golden_suite(const SuiteConfig& config);

}  // namespace combkit
