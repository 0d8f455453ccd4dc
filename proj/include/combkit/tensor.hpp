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

#include "combkit/matrix.hpp"

namespace combkit {

// A Hilbert-space factor: integer label plus dimension.
struct Wire {
  int label = 0;
  int dim = 1;
  friend bool operator==(const Wire& a, const Wire& b) {
    return a.label == b.label && a.dim == b.dim;
  }
};

// Operator on an ordered tensor product of labeled wires. The wire order is
// the tensor-factor order of rows and columns; the leftmost wire is the most
// significant index (row-major).
class LabeledOp {
 public:
  LabeledOp() = default;
  LabeledOp(std::vector<Wire> wires, CMat matrix);

  static LabeledOp identity(const std::vector<Wire>& wires);
  static LabeledOp scalar(cplx value);  // zero wires, 1x1 matrix

  const std::vector<Wire>& wires() const { return wires_; }
  const CMat& mat() const { return m_; }
  CMat& mat() { return m_; }

  int dim() const { return m_.rows(); }
  int wire_count() const { return static_cast<int>(wires_.size()); }
  bool has_label(int label) const;
  int wire_index(int label) const;  // -1 if absent
  int wire_dim(int label) const;
  std::vector<int> labels() const;

  LabeledOp operator+(const LabeledOp& o) const;
  LabeledOp operator-(const LabeledOp& o) const;
  LabeledOp operator*(cplx s) const;
  LabeledOp relabeled(const std::vector<int>& new_labels) const;

 private:
  std::vector<Wire> wires_;
  CMat m_;
};

// Tensor product; label sets must be disjoint.
LabeledOp kron(const LabeledOp& a, const LabeledOp& b);
CMat kron(const CMat& a, const CMat& b);

// Partial trace over the named labels; remaining wires keep their order.
LabeledOp partial_trace(const LabeledOp& op, const std::vector<int>& traced);

// Transpose on the named factors only.
LabeledOp partial_transpose(const LabeledOp& op, const std::vector<int>& wires);

// Reorders tensor factors to `new_order` (a permutation of the labels).
LabeledOp permute_wires(const LabeledOp& op, const std::vector<int>& new_order);

// Brings `op` to the wire order of `ref` (same label set required).
LabeledOp align_like(const LabeledOp& op, const LabeledOp& ref);

// Hermitian eigendecomposition, PSD square root, support pseudo-inverse and
// PSD check lifted to labeled operators.
EigResult herm_eig(const LabeledOp& op);
LabeledOp mat_sqrt_psd(const LabeledOp& op);
LabeledOp pinv_on_support(const LabeledOp& op);
bool is_psd(const LabeledOp& op, double eig_tol = tol::psd);

}  // namespace combkit
