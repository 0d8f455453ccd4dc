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

#include "combkit/rng.hpp"
#include "combkit/tensor.hpp"

namespace combkit {

// Haar-random element of U(d): complex Ginibre matrix followed by QR via
// modified Gram-Schmidt (the positive R diagonal makes Q Haar distributed).
CMat haar_unitary(int d, CounterRng& rng);
CMat haar_unitary(int d, std::uint64_t seed, std::uint64_t index = 0);

// First `cols` columns of a Haar unitary: a Haar-random isometry.
CMat haar_isometry(int rows, int cols, CounterRng& rng);

// One group factor of a product representation: the same Haar unitary acts on
// every listed wire, conjugated where `conj` is set. All wires share one
// dimension. Supported wire counts: 1, 2 and 3 (at most one "odd one out" in
// the plain/conj pattern for 3 wires).
struct RepFactor {
  std::vector<Wire> wires;
  std::vector<bool> conj;
  int dim() const { return wires.empty() ? 1 : wires.front().dim; }
};

// Product of independent group factors, e.g. U (x) V (x) U* (x) V*.
struct RepDescriptor {
  std::vector<RepFactor> factors;
  std::vector<int> all_labels() const;
};

enum class RepKind { kUU, kUUstar, kUUUstar, kGeneric };
RepKind classify(const RepFactor& f);

// One isotypic component of a decomposed representation.
struct IsotypicBlock {
  std::string name;       // "+", "-", "p", "q", "alpha", "beta", "gamma", ...
  int rep_dim = 0;        // d_nu
  int mult = 0;           // m_nu
  LabeledOp projector;    // sum_i T^{nu,i,i}
  std::vector<LabeledOp> intertwiners;  // T^{nu,i,j}, row-major in (i,j); empty if mult == 1
};

// Closed-form isotypic blocks for a single supported factor. Throws
// unsupported_rep for anything else (use commutant_decompose instead).
std::vector<IsotypicBlock> projectors(const RepDescriptor& rep);

struct unsupported_rep : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Exact Haar average of op under the (product) representation; wires of op
// not covered by the representation are bystanders.
LabeledOp twirl_exact(const LabeledOp& op, const RepDescriptor& rep);

// Samples one representation element on the full wire set of `target_wires`
// (identity on uncovered wires), in that order.
CMat rep_sample(const RepDescriptor& rep, const std::vector<Wire>& target_wires, CounterRng& rng);

struct McTwirl {
  LabeledOp mean;
  double stderr_max = 0.0;  // max per-entry standard error of the mean
  int samples = 0;
};
McTwirl twirl_mc(const LabeledOp& op, const RepDescriptor& rep, int n_samples, std::uint64_t seed);

// Numerically recovered block structure of the commutant of an arbitrary
// unitary representation, given only a sampler for its elements.
struct NumericalBlock {
  CMat projector;
  int rep_dim = 0;
  int mult = 0;
};
struct CommutantDecomposeOptions {
  int first_pass_samples = 20000;
  int refine_samples = 2000;
  int max_passes = 12;
  double commutator_target = 1e-6;
  double cluster_rel_gap = 1e-4;
};
std::vector<NumericalBlock> commutant_decompose(
    const std::function<CMat(CounterRng&)>& rep_sampler, int dim, std::uint64_t seed,
    const CommutantDecomposeOptions& opts = {});

// Exact Haar-U(2) average of `op` under U^(x)n with conjugate action on the
// masked wires, via the permutation-operator span (d = 2 only; conjugate
// wires are handled with the antisymmetric intertwiner of SU(2)).
CMat haar_average_tensor_rep_d2(const CMat& op, int n_wires, const std::vector<bool>& conj_mask);

// Convenience builders for the closed-form projector families.
CMat sym_projector(int d);       // on H (x) H
CMat antisym_projector(int d);   // on H (x) H
CMat pp_projector(int d);        // |I>><<I|/d on H (x) H

}  // namespace combkit
