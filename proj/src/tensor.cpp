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

#include "combkit/tensor.hpp"

#include <algorithm>
#include <set>

namespace combkit {

namespace {

long long product_dim(const std::vector<Wire>& wires) {
  long long p = 1;
  for (const Wire& w : wires) {
    if (w.dim < 1) throw dim_mismatch("wire dimension must be >= 1");
    p *= w.dim;
  }
  return p;
}

void check_unique_labels(const std::vector<Wire>& wires) {
  std::set<int> seen;
  for (const Wire& w : wires)
    if (!seen.insert(w.label).second) throw dim_mismatch("duplicate wire label");
}

// Mixed-radix strides, leftmost wire most significant.
std::vector<long long> strides_of(const std::vector<Wire>& wires) {
  std::vector<long long> s(wires.size(), 1);
  for (int i = static_cast<int>(wires.size()) - 2; i >= 0; --i)
    s[i] = s[i + 1] * wires[i + 1].dim;
  return s;
}

}  // namespace

LabeledOp::LabeledOp(std::vector<Wire> wires, CMat matrix)
    : wires_(std::move(wires)), m_(std::move(matrix)) {
  check_unique_labels(wires_);
  long long d = product_dim(wires_);
  if (!m_.square() || m_.rows() != d)
    throw dim_mismatch("matrix dimension does not match product of wire dims");
}

LabeledOp LabeledOp::identity(const std::vector<Wire>& wires) {
  return LabeledOp(wires, CMat::identity(static_cast<int>(product_dim(wires))));
}

LabeledOp LabeledOp::scalar(cplx value) {
  CMat m(1, 1);
  m.at(0, 0) = value;
  return LabeledOp({}, std::move(m));
}

bool LabeledOp::has_label(int label) const { return wire_index(label) >= 0; }

int LabeledOp::wire_index(int label) const {
  for (size_t i = 0; i < wires_.size(); ++i)
    if (wires_[i].label == label) return static_cast<int>(i);
  return -1;
}

int LabeledOp::wire_dim(int label) const {
  int i = wire_index(label);
  if (i < 0) throw dim_mismatch("missing wire label");
  return wires_[i].dim;
}

std::vector<int> LabeledOp::labels() const {
  std::vector<int> l;
  l.reserve(wires_.size());
  for (const Wire& w : wires_) l.push_back(w.label);
  return l;
}

LabeledOp LabeledOp::operator+(const LabeledOp& o) const {
  return LabeledOp(wires_, m_ + align_like(o, *this).mat());
}

LabeledOp LabeledOp::operator-(const LabeledOp& o) const {
  return LabeledOp(wires_, m_ - align_like(o, *this).mat());
}

LabeledOp LabeledOp::operator*(cplx s) const { return LabeledOp(wires_, m_ * s); }

LabeledOp LabeledOp::relabeled(const std::vector<int>& new_labels) const {
  if (new_labels.size() != wires_.size()) throw dim_mismatch("relabel: wrong label count");
  std::vector<Wire> w = wires_;
  for (size_t i = 0; i < w.size(); ++i) w[i].label = new_labels[i];
  return LabeledOp(std::move(w), m_);
}

CMat kron(const CMat& a, const CMat& b) {
  CMat r(a.rows() * b.rows(), a.cols() * b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) {
      const cplx s = a.at(i, j);
      if (s == cplx(0.0, 0.0)) continue;
      for (int k = 0; k < b.rows(); ++k)
        for (int l = 0; l < b.cols(); ++l)
          r.at(i * b.rows() + k, j * b.cols() + l) = s * b.at(k, l);
    }
  return r;
}

LabeledOp kron(const LabeledOp& a, const LabeledOp& b) {
  for (const Wire& w : b.wires())
    if (a.has_label(w.label)) throw dim_mismatch("kron: wire label collision");
  std::vector<Wire> wires = a.wires();
  wires.insert(wires.end(), b.wires().begin(), b.wires().end());
  return LabeledOp(std::move(wires), kron(a.mat(), b.mat()));
}

LabeledOp partial_trace(const LabeledOp& op, const std::vector<int>& traced) {
  for (int lbl : traced)
    if (!op.has_label(lbl)) throw dim_mismatch("partial_trace: unknown wire label");
  if (traced.empty()) return op;

  std::vector<Wire> keep, drop;
  for (const Wire& w : op.wires()) {
    if (std::find(traced.begin(), traced.end(), w.label) != traced.end())
      drop.push_back(w);
    else
      keep.push_back(w);
  }
  const auto all_str = strides_of(op.wires());
  const auto keep_pos = [&] {
    std::vector<int> p;
    for (size_t i = 0; i < op.wires().size(); ++i)
      if (std::find(traced.begin(), traced.end(), op.wires()[i].label) == traced.end())
        p.push_back(static_cast<int>(i));
    return p;
  }();
  const auto drop_pos = [&] {
    std::vector<int> p;
    for (size_t i = 0; i < op.wires().size(); ++i)
      if (std::find(traced.begin(), traced.end(), op.wires()[i].label) != traced.end())
        p.push_back(static_cast<int>(i));
    return p;
  }();

  long long dk = product_dim(keep);
  long long dd = product_dim(drop);
  CMat r(static_cast<int>(dk), static_cast<int>(dk));

  // Enumerate kept indices via mixed radix over kept wires, traced index
  // diagonal-summed.
  std::vector<int> kdig(keep.size(), 0), ddig(drop.size(), 0);
  for (long long ri = 0; ri < dk; ++ri) {
    long long t = ri;
    for (size_t i = 0; i < keep.size(); ++i) {
      long long rest = 1;
      for (size_t j = i + 1; j < keep.size(); ++j) rest *= keep[j].dim;
      kdig[i] = static_cast<int>(t / rest);
      t %= rest;
    }
    for (long long rj = 0; rj < dk; ++rj) {
      long long u = rj;
      std::vector<int> kdigc(keep.size(), 0);
      for (size_t i = 0; i < keep.size(); ++i) {
        long long rest = 1;
        for (size_t j = i + 1; j < keep.size(); ++j) rest *= keep[j].dim;
        kdigc[i] = static_cast<int>(u / rest);
        u %= rest;
      }
      cplx acc = 0.0;
      for (long long s = 0; s < dd; ++s) {
        long long v = s;
        for (size_t i = 0; i < drop.size(); ++i) {
          long long rest = 1;
          for (size_t j = i + 1; j < drop.size(); ++j) rest *= drop[j].dim;
          ddig[i] = static_cast<int>(v / rest);
          v %= rest;
        }
        long long row = 0, col = 0;
        for (size_t i = 0; i < keep.size(); ++i) {
          row += kdig[i] * all_str[keep_pos[i]];
          col += kdigc[i] * all_str[keep_pos[i]];
        }
        for (size_t i = 0; i < drop.size(); ++i) {
          row += ddig[i] * all_str[drop_pos[i]];
          col += ddig[i] * all_str[drop_pos[i]];
        }
        acc += op.mat().at(static_cast<int>(row), static_cast<int>(col));
      }
      r.at(static_cast<int>(ri), static_cast<int>(rj)) = acc;
    }
  }
  return LabeledOp(std::move(keep), std::move(r));
}

LabeledOp partial_transpose(const LabeledOp& op, const std::vector<int>& wires) {
  for (int lbl : wires)
    if (!op.has_label(lbl)) throw dim_mismatch("partial_transpose: unknown wire label");
  const auto& ws = op.wires();
  const auto str = strides_of(ws);
  const int n = static_cast<int>(ws.size());
  std::vector<bool> flip(n, false);
  for (int lbl : wires) flip[op.wire_index(lbl)] = true;

  const long long d = op.dim();
  CMat r(static_cast<int>(d), static_cast<int>(d));
  std::vector<int> rd(n), cd(n);
  for (long long row = 0; row < d; ++row) {
    long long t = row;
    for (int i = 0; i < n; ++i) {
      rd[i] = static_cast<int>(t / str[i]);
      t %= str[i];
    }
    for (long long col = 0; col < d; ++col) {
      long long u = col;
      for (int i = 0; i < n; ++i) {
        cd[i] = static_cast<int>(u / str[i]);
        u %= str[i];
      }
      long long nr = 0, nc = 0;
      for (int i = 0; i < n; ++i) {
        int a = rd[i], b = cd[i];
        if (flip[i]) std::swap(a, b);
        nr += a * str[i];
        nc += b * str[i];
      }
      r.at(static_cast<int>(nr), static_cast<int>(nc)) = op.mat().at(static_cast<int>(row), static_cast<int>(col));
    }
  }
  return LabeledOp(ws, std::move(r));
}

LabeledOp permute_wires(const LabeledOp& op, const std::vector<int>& new_order) {
  const auto& ws = op.wires();
  const int n = static_cast<int>(ws.size());
  if (static_cast<int>(new_order.size()) != n)
    throw dim_mismatch("permute_wires: order is not a permutation of labels");
  std::vector<int> src(n);  // position in old order of the i-th new wire
  std::vector<bool> used(n, false);
  for (int i = 0; i < n; ++i) {
    int idx = op.wire_index(new_order[i]);
    if (idx < 0 || used[idx]) throw dim_mismatch("permute_wires: order is not a permutation of labels");
    used[idx] = true;
    src[i] = idx;
  }
  std::vector<Wire> nw(n);
  for (int i = 0; i < n; ++i) nw[i] = ws[src[i]];

  const auto old_str = strides_of(ws);
  const auto new_str = strides_of(nw);
  const long long d = op.dim();
  // row_map[old_index] = new_index
  std::vector<long long> row_map(d);
  std::vector<int> dig(n);
  for (long long r = 0; r < d; ++r) {
    long long t = r;
    for (int i = 0; i < n; ++i) {
      dig[i] = static_cast<int>(t / old_str[i]);
      t %= old_str[i];
    }
    long long nr = 0;
    for (int i = 0; i < n; ++i) nr += dig[src[i]] * new_str[i];
    row_map[r] = nr;
  }
  CMat m(static_cast<int>(d), static_cast<int>(d));
  for (long long r = 0; r < d; ++r)
    for (long long c = 0; c < d; ++c)
      m.at(static_cast<int>(row_map[r]), static_cast<int>(row_map[c])) =
          op.mat().at(static_cast<int>(r), static_cast<int>(c));
  return LabeledOp(std::move(nw), std::move(m));
}

LabeledOp align_like(const LabeledOp& op, const LabeledOp& ref) {
  if (op.wire_count() != ref.wire_count()) throw dim_mismatch("align_like: label sets differ");
  return permute_wires(op, ref.labels());
}

EigResult herm_eig(const LabeledOp& op) { return herm_eig(op.mat()); }

LabeledOp mat_sqrt_psd(const LabeledOp& op) { return LabeledOp(op.wires(), mat_sqrt_psd(op.mat())); }

LabeledOp pinv_on_support(const LabeledOp& op) {
  return LabeledOp(op.wires(), pinv_on_support(op.mat()));
}

bool is_psd(const LabeledOp& op, double eig_tol) { return is_psd(op.mat(), eig_tol); }

}  // namespace combkit
