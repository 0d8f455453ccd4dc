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

#include "combkit/comb.hpp"
#include "combkit/group.hpp"
#include "combkit/verify.hpp"

namespace combkit {

// ---------------------------------------------------------------------------
// Cloning of a unitary gate (1 use -> 2 copies).
// Wires: 0,4 = copy inputs; 1 = gate input; 2 = gate output; 3,5 = copy
// outputs; the internal memory is a 2-dimensional flag.
// ---------------------------------------------------------------------------
struct ClonerNetwork {
  LabeledOp c1;  // first step Choi, (1, flag; 0, 4)
  LabeledOp c2;  // second step Choi, (3, 5; 2, flag)
  LabeledOp choi;
  std::vector<Tooth> teeth;
  double closed_form = 0.0;  // (d + sqrt(d^2-1)) / d^3
  double exact = 0.0;        // twirl evaluation of the averaged fidelity
};
ClonerNetwork optimal_unitary_cloner(int d);
McEstimate cloner_mc(const ClonerNetwork& net, int d, int n_samples, std::uint64_t seed);
// Direct form of the composed channel at fixed U (for cross-checks).
LabeledOp cloner_output_choi(const ClonerNetwork& net, const CMat& u);

// ---------------------------------------------------------------------------
// Learning of a unitary (N=1 uses, M copies; measure-and-reprepare optimum).
// ---------------------------------------------------------------------------
struct LearnerResult {
  int m_copies = 1;
  LabeledOp store_state;     // |I>><<I|/d on (gate output, reference)
  double closed_form = 0.0;  // 2/d^2 (M=1); 6/d^4, d>2 / 5/16, d=2 (M=2)
  double exact = 0.0;        // sum of squared multiplicities / d^(2M)
};
LearnerResult optimal_learner(int d, int m_copies);
McEstimate learner_mc(int d, int m_copies, int n_samples, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Inversion of a unitary (supermap and learning routes, both 2/d^2).
// Wires: 0 = input state; 1 = gate input; 2 = gate output; 3 = output.
// ---------------------------------------------------------------------------
struct InverterResult {
  LabeledOp supermap;  // on (3,1,2,0)
  std::vector<Tooth> teeth;
  double closed_form = 0.0;
  double exact_supermap = 0.0;
  double exact_learning = 0.0;
};
InverterResult optimal_inverter(int d);
McEstimate inverter_mc_supermap(const InverterResult& inv, int d, int n_samples,
                                std::uint64_t seed);
McEstimate inverter_mc_learning(int d, int n_samples, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Information-disturbance tradeoff for unitary estimation.
// Wires: 0 = input; 1 = gate input; 2 = gate output; 3 = output.
// ---------------------------------------------------------------------------
struct TradeoffResult {
  double x = 0.0, y = 0.0;
  LabeledOp r_seed;  // R_I = |chi><chi| on (0,1,2,3)
  double f_formula = 0.0, g_formula = 0.0;
  double f_exact = 0.0, g_exact = 0.0;  // Tr[R_F R_I], Tr[R_G R_I]
  double info = 0.0, dist = 0.0;        // normalized coordinates I, D
  double curve_residual = 0.0;          // |d^2 (D-I)^2 - 4 D (1-I)|
};
TradeoffResult tradeoff_instrument(int d, double x);
McEstimate tradeoff_mc_fidelity(const TradeoffResult& t, int d, int n_samples,
                                std::uint64_t seed);
McEstimate tradeoff_mc_gain(const TradeoffResult& t, int d, int n_samples, std::uint64_t seed);

struct TradeoffRow {
  double x, y, f, g, info, dist, residual;
};
std::vector<TradeoffRow> tradeoff_curve(int d, int points);

// ---------------------------------------------------------------------------
// Learning / cloning of a von Neumann measurement.
// ---------------------------------------------------------------------------

// 1 -> 1 learning. Instrument wires: 1 = classical result of the single use,
// 2 = replica input, 0 = device input; outcomes indexed by i.
struct MeasLearn11 {
  int d = 0;
  std::vector<LabeledOp> instrument;  // R_i on (1, 2, 0)
  double closed_form = 0.0;           // (d+1)/d^2
  double exact = 0.0;                 // twirled-coefficient evaluation
};
MeasLearn11 measurement_learning_1to1(int d);
// Replicated POVM G_i^(U) for a sampled gate U.
std::vector<CMat> replicated_povm_11(const MeasLearn11& ml, const CMat& u);
McEstimate meas_learn_11_mc(const MeasLearn11& ml, int n_samples, std::uint64_t seed);

// 2 -> 1 learning: one-parameter family over the symmetric/antisymmetric
// weights (t+, t-).
struct MeasLearn21 {
  int d = 0;
  double t_plus = 0.0, t_minus = 0.0;
  double f_max = 0.0;           // maximum of the block-derived objective
  double f_display_formula = 0.0;  // maximum of the quoted display formula
  bool unimodal = false;
  std::string note;
};
MeasLearn21 measurement_learning_2to1(int d);
// The block-derived objective F(t+), exposed for scans.
double meas_learn_21_objective(int d, double t_plus);

// 1 -> 2 learning. The instrument is reconstructed from the optimal
// commutant blocks; wires (3, 2) = replica inputs, 1 = classical result,
// 0 = device input.
struct MeasLearn12 {
  int d = 0;
  double a_param = 0.0;
  std::vector<std::vector<LabeledOp>> instrument;  // R'_{ij,k} on (3,2,0), [i*d+j][k]
  double closed_form = 0.0;   // quoted value, (7+2sqrt(3))/12 at d=2
  double delta_eval = 0.0;    // independent twirled-coefficient evaluation
  std::string discrepancy;    // non-empty when the two disagree
};
MeasLearn12 measurement_learning_1to2(int d);
std::vector<CMat> replicated_povm_12(const MeasLearn12& ml, const CMat& u);  // [i*d+j]
McEstimate meas_learn_12_mc(const MeasLearn12& ml, int n_samples, std::uint64_t seed);

// 1 -> 2 cloning. Blocks on (2, 1, 0): 2 = device input, (1,0) = replica
// inputs.
struct MeasClone12 {
  int d = 0;
  CMat s_xx;  // alpha block of the all-equal class
  CMat s_xy;  // alpha block of the device-matches-one-replica class
  std::vector<std::vector<LabeledOp>> instrument;  // R'_{ij,k} on (2,1,0), [i*d+j][k]
  double closed_form = 0.0;  // 4/(3d)
  double exact = 0.0;        // twirled-coefficient evaluation
};
MeasClone12 measurement_cloning_1to2(int d);
std::vector<CMat> replicated_povm_c12(const MeasClone12& mc, const CMat& u);
McEstimate meas_clone_12_mc(const MeasClone12& mc, int n_samples, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Brute-force oracle programs for the measurement protocols (d small).
// ---------------------------------------------------------------------------
AffinePsdProgram meas_learn_11_program(int d);
AffinePsdProgram meas_learn_21_program(int d);
AffinePsdProgram meas_learn_12_program(int d);
AffinePsdProgram meas_clone_12_program(int d);

// Parallel-restricted 3 -> 1 learning oracle at d=2 (the true optimum uses a
// sequential strategy; this bound is reported informatively).
struct Oracle31Result {
  double value = 0.0;
  double constraint_residual = 0.0;
  int iterations = 0;
};
Oracle31Result meas_learn_31_parallel_oracle_d2(int max_iters = 1200);

}  // namespace combkit
