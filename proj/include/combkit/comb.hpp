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

#include "combkit/choi.hpp"
#include "combkit/tensor.hpp"

namespace combkit {

// One time step of a network: input wires entering, output wires leaving.
// Either side may be empty (state preparation / measurement-only steps).
struct Tooth {
  std::vector<int> in;
  std::vector<int> out;
};

enum class CombFlavor { deterministic, probabilistic };

struct Comb {
  LabeledOp choi;
  std::vector<Tooth> teeth;
  CombFlavor flavor = CombFlavor::deterministic;
};

struct CombCheck {
  bool ok = false;
  bool psd_ok = false;
  std::vector<double> residuals;   // residual of tooth k condition, k = N..1
  std::vector<LabeledOp> reduced;  // R^(N-1), ..., R^(0)
  std::string message;
};

// Verifies the recursive normalization Tr_{out_k}[R^(k)] = I_{in_k} (x) R^(k-1)
// tooth by tooth, ending at R^(0) = 1.
CombCheck check_comb(const LabeledOp& choi, const std::vector<Tooth>& teeth,
                     double tolerance = 1e-9, bool check_psd = true);

struct IsometryChain {
  std::vector<CMat> isometries;   // V^(k): in_k (x) A_{k-1} -> out_k (x) A_k
  std::vector<int> ancilla_dims;  // dim A_k = rank R^(k), k = 1..N
};

// Constructive realization of a deterministic comb as a chain of isometries
// with minimal ancillas; the final ancilla is traced out.
IsometryChain realize_comb(const Comb& comb, double tolerance = 1e-9);

// Relinks an isometry chain into the Choi operator of the whole network
// (final ancilla traced out), for round-trip verification.
LabeledOp chain_choi(const IsometryChain& chain, const std::vector<Tooth>& teeth,
                     const LabeledOp& reference_choi);

struct Stinespring {
  CMat isometry;  // V : in -> out (x) ancilla
  int ancilla_dim = 0;
};
Stinespring stinespring(const Channel& ch, double tolerance = 1e-9);

struct InstrumentRealization {
  CMat isometry;           // dilation of the sum channel
  int ancilla_dim = 0;
  std::vector<CMat> povm;  // on the ancilla
};
// Realizes a quantum instrument (CP maps summing to a channel) as one
// deterministic dilation followed by an ancilla POVM.
InstrumentRealization realize_instrument(const std::vector<Channel>& elements,
                                         double tolerance = 1e-9);

// A tester: positive operators summing to a deterministic comb whose first
// input and last output are trivial.
struct Tester {
  std::vector<LabeledOp> elements;
  std::vector<Tooth> teeth;
};

CombCheck check_tester(const Tester& tester, double tolerance = 1e-9);

struct TwoTesterRealization {
  LabeledOp input_state;        // |sqrt(rho)>><<sqrt(rho)| on (wire 1, ancilla)
  std::vector<LabeledOp> povm;  // on (wire 2, ancilla)
  int ancilla_dim = 0;
  int ancilla_label = 0;
};
// Splits a 2-tester into a pure input state and a POVM on output (x) ancilla.
TwoTesterRealization realize_2tester(const Tester& tester, int ancilla_label,
                                     double tolerance = 1e-9);

// Generalized Born rule p = Tr[R T^t], clamped to [0,1].
double born(const LabeledOp& tester_element, const LabeledOp& comb_choi);

// Probabilistic comb dominance: R PSD and S - R PSD within tolerance.
bool dominated_by(const LabeledOp& r, const LabeledOp& s, double tolerance = 1e-9);

}  // namespace combkit
