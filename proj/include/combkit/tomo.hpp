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

#include <string>
#include <vector>

#include "combkit/group.hpp"
#include "combkit/tensor.hpp"

namespace combkit {

// Frame of vectorized measurement operators |Pi_i>>.
struct Frame {
  std::vector<std::vector<cplx>> vectors;
};
struct DualFrame {
  std::vector<std::vector<cplx>> vectors;
};

// F = sum_i |Pi_i>><<Pi_i|.
CMat frame_operator(const Frame& frame);

struct OptimalDualResult {
  DualFrame dual;
  CMat x_op;           // X = sum |Pi>><<Pi| / <<R_S|Pi>>
  double eta = 0.0;    // Tr[X^-1 G] on the frame support
  int dropped = 0;     // zero-probability elements removed
};

// Variance-optimal dual frame for ensemble average `r_s` (vectorized) and
// observable weight G; elements with vanishing probability are dropped.
OptimalDualResult optimal_dual(const Frame& frame, const std::vector<cplx>& r_s, const CMat& g);

// eta for an arbitrary dual (used to verify optimality of the optimal dual).
double eta_of_dual(const Frame& frame, const DualFrame& dual, const std::vector<cplx>& r_s,
                   const CMat& g);

// Duals of `frame` perturbed away from `base` inside the dual-frame manifold.
DualFrame perturb_dual(const Frame& frame, const DualFrame& base, double amplitude,
                       CounterRng& rng);

enum class TomoTarget { operations, channels, unital, states, effects };
const char* to_string(TomoTarget t);

// Closed-form optimal figures of merit.
double eta_closed_form(TomoTarget target, int d);

struct TesterSeed {
  LabeledOp seed;   // Pi_0; wires (0=in, 1=out) for process targets, wire 1 otherwise
  double beta = 0.0;
};
TesterSeed optimal_tester_seed(TomoTarget target, int d);

struct CovariantEval {
  double eta = 0.0;          // Tr[X~^-1 Q G Q] with G = I
  double coeff_a = 0.0;      // Tr[X~ P^{qp}] / Tr[P^{qp}]
  double coeff_b = 0.0;
  double coeff_c = 0.0;
  bool info_complete = false;
  CMat x_twirled;
};
// Exact evaluation of the covariant optimal tester via the twirled frame
// operator. For states/effects the single-wire analogue is evaluated.
CovariantEval covariant_eta_exact(TomoTarget target, int d);

// Monte-Carlo eta from a finite Haar-sampled covariant tester for process
// targets (operations/channels/unital).
double eta_mc(TomoTarget target, int d, int n_samples, std::uint64_t seed);

// eta for a block-weighted observable set G = g1 P^pp + g2 P^qp + g3 P^pq +
// g4 P^qq, evaluated on the twirled frame operator of `eval` (no
// re-optimization of the seed).
double eta_weighted(const CovariantEval& eval, int d, double g1, double g2, double g3, double g4);

}  // namespace combkit
