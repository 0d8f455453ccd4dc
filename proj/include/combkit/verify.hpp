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

#include <functional>
#include <string>
#include <vector>

#include "combkit/choi.hpp"
#include "combkit/rng.hpp"

namespace combkit {

// State fidelity f(rho, sigma) = |Tr sqrt(sqrt(sigma) rho sqrt(sigma))|^2.
double state_fidelity(const CMat& rho, const CMat& sigma);

// Channel fidelity: state fidelity of the normalized Choi operators.
double channel_fidelity(const Channel& a, const Channel& b);

struct AvgFidelityCheck {
  double lhs_mean = 0.0;  // MC average of output-state fidelity over pure inputs
  double lhs_stderr = 0.0;
  double rhs = 0.0;       // d/(d+1) F(A,B) + 1/(d+1)
  int samples = 0;
};
// One of the two channels must be unitary (pass it as `u`).
AvgFidelityCheck avg_state_fidelity_check(const Channel& a, const CMat& u, int n_samples,
                                          std::uint64_t seed);

// POVM fidelity (1/d) sum_i Tr[P_i Q_i]; equal outcome counts required.
double povm_fidelity(const std::vector<CMat>& p, const std::vector<CMat>& q);

struct McEstimate {
  double mean = 0.0;
  double stderr = 0.0;
  int samples = 0;
};

// Sample mean and standard error of a per-draw evaluator.
McEstimate mc_mean(int n_samples, std::uint64_t seed, const std::function<double(CounterRng&)>& draw);

// Self-normalized importance sampling: draw returns (weight, value); the
// estimate is E[w v]/E[w] with a delta-method standard error.
McEstimate mc_ratio(int n_samples, std::uint64_t seed,
                    const std::function<std::pair<double, double>(CounterRng&)>& draw);

// ---------------------------------------------------------------------------
// Brute-force oracle: maximize a linear functional over block-diagonal PSD
// variables subject to affine operator constraints, by projected ascent with
// Dykstra projections onto (PSD cone) + (affine set).
// ---------------------------------------------------------------------------

struct AffinePsdProgram {
  std::vector<int> block_dims;
  std::vector<CMat> objective;  // maximize sum_b Re Tr[objective_b X_b]

  struct OperatorConstraint {
    int target_dim = 0;
    // Real-linear Hermitian-preserving maps applied to the named blocks; the
    // summed images must equal `rhs`.
    std::vector<std::pair<int, std::function<CMat(const CMat&)>>> terms;
    CMat rhs;
  };
  std::vector<OperatorConstraint> constraints;
  std::vector<CMat> feasible_start;
};

struct PsdMaxResult {
  std::vector<CMat> x;
  double value = 0.0;
  double constraint_residual = 0.0;
  double min_eigenvalue = 0.0;
  int iterations = 0;
  bool converged = false;
};

PsdMaxResult psd_affine_maximize(const AffinePsdProgram& prog, int max_iters = 3000,
                                 double tolerance = 1e-7);

// ---------------------------------------------------------------------------
// Verification reports.
// ---------------------------------------------------------------------------

struct VerificationReport {
  std::string protocol;
  int dim = 0;
  double target = 0.0;  // closed-form value
  double exact = 0.0;   // exact-path evaluation
  double mc = 0.0;
  double mc_stderr = 0.0;
  bool pass_exact = false;
  bool pass_mc = false;
  std::uint64_t seed = 0;
  int samples = 0;
  long long ms = 0;
  std::string note;  // recorded discrepancies, oracle readings

  void grade(double tol_exact = 1e-9, double tol_sigma = 5.0);
  bool pass() const { return pass_exact && pass_mc; }
};

}  // namespace combkit
