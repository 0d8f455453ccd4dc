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

#include "combkit/rng.hpp"
#include "combkit/tensor.hpp"

namespace combkit {

// |A>> = sum_{n,m} A_{nm} |n>|m>  (row-major flatten of A).
std::vector<cplx> vectorize(const CMat& a);
CMat devectorize(const std::vector<cplx>& v, int rows, int cols);

// Outer product |a><b| of plain vectors.
CMat outer(const std::vector<cplx>& a, const std::vector<cplx>& b);

// A CP map between labeled wire sets, carried by its Choi operator. The Choi
// wire order is (out wires, in wires).
struct Channel {
  LabeledOp choi;
  std::vector<int> in_wires;
  std::vector<int> out_wires;

  int in_dim() const;
  int out_dim() const;
};

struct KrausSet {
  std::vector<CMat> operators;  // each maps in-space -> out-space
};

// Choi operator of the map X -> sum_i K_i X K_i^dag, with wires (out, in).
Channel choi_of_map(const KrausSet& kraus, Wire in_wire, Wire out_wire);

// Applies the channel to a state given on the channel's input wires.
LabeledOp apply_channel(const Channel& ch, const LabeledOp& state);

// Canonical Kraus operators from the Choi eigendecomposition; global phases
// fixed by making the largest-magnitude entry real positive.
KrausSet kraus_from_choi(const Channel& ch);

bool check_tp(const Channel& ch, double tolerance = 1e-9);
bool check_hp(const Channel& ch, double tolerance = 1e-9);
bool check_cp(const Channel& ch, double tolerance = 1e-9);

// Link product. Shared labels are contracted (partial transpose on the shared
// factors of `a`, multiply, trace); disjoint labels tensor. Output wire order:
// surviving wires of `a`, then surviving wires of `b`.
LabeledOp link(const LabeledOp& a, const LabeledOp& b);

// --- common constructions -------------------------------------------------

Channel identity_channel(Wire in, Wire out);
Channel unitary_channel(const CMat& u, Wire in, Wire out);
Channel depolarizing_channel(int d, Wire in, Wire out);
// Random CPTP channel: Stinespring with a Haar isometry (env dimension = d).
Channel random_cptp(Wire in, Wire out, CounterRng& rng);

// |I>><<I| on wires (a, b) with equal dims.
LabeledOp max_ent_projector(Wire a, Wire b);
// |U>><<U| on wires (out, in): the Choi of the unitary U.
LabeledOp unitary_choi_op(const CMat& u, Wire out, Wire in);

// Choi operator sum_i |K_i>><<K_i| for maps between composite wire sets; the
// Kraus row index runs over the product of `out_wires`, the column index over
// `in_wires`. Result wires: out_wires ++ in_wires.
LabeledOp choi_from_kraus(const std::vector<CMat>& kraus, const std::vector<Wire>& out_wires,
                          const std::vector<Wire>& in_wires);

}  // namespace combkit
