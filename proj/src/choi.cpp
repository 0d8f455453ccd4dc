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

#include "combkit/choi.hpp"

#include <algorithm>
#include <cmath>

namespace combkit {

std::vector<cplx> vectorize(const CMat& a) {
  return a.data();  // row-major flatten is exactly |A>>
}

CMat devectorize(const std::vector<cplx>& v, int rows, int cols) {
  if (static_cast<long long>(rows) * cols != static_cast<long long>(v.size()))
    throw dim_mismatch("devectorize: size mismatch");
  return CMat(rows, cols, v);
}

CMat outer(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  CMat m(static_cast<int>(a.size()), static_cast<int>(b.size()));
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j)
      m.at(static_cast<int>(i), static_cast<int>(j)) = a[i] * std::conj(b[j]);
  return m;
}

int Channel::in_dim() const {
  int d = 1;
  for (int l : in_wires) d *= choi.wire_dim(l);
  return d;
}

int Channel::out_dim() const {
  int d = 1;
  for (int l : out_wires) d *= choi.wire_dim(l);
  return d;
}

Channel choi_of_map(const KrausSet& kraus, Wire in_wire, Wire out_wire) {
  if (kraus.operators.empty()) throw dim_mismatch("choi_of_map: empty Kraus set");
  const int din = kraus.operators.front().cols();
  const int dout = kraus.operators.front().rows();
  if (din != in_wire.dim || dout != out_wire.dim)
    throw dim_mismatch("choi_of_map: Kraus dimensions do not match wires");
  CMat c(dout * din, dout * din);
  for (const CMat& k : kraus.operators) {
    if (k.rows() != dout || k.cols() != din)
      throw dim_mismatch("choi_of_map: inconsistent Kraus dimensions");
    auto v = vectorize(k);
    c += outer(v, v);
  }
  return Channel{LabeledOp({out_wire, in_wire}, std::move(c)), {in_wire.label}, {out_wire.label}};
}

LabeledOp apply_channel(const Channel& ch, const LabeledOp& state) {
  std::vector<int> want = ch.in_wires;
  std::vector<int> got = state.labels();
  std::sort(want.begin(), want.end());
  std::sort(got.begin(), got.end());
  if (want != got) throw dim_mismatch("apply_channel: state wires do not match channel input");

  // M(X) = Tr_in[(I_out (x) X^T) M], evaluated with direct index loops.
  std::vector<int> order = ch.out_wires;
  order.insert(order.end(), ch.in_wires.begin(), ch.in_wires.end());
  LabeledOp m = permute_wires(ch.choi, order);
  LabeledOp x = permute_wires(state, ch.in_wires);

  const int dout = ch.out_dim();
  const int din = ch.in_dim();
  CMat r(dout, dout);
  for (int o = 0; o < dout; ++o)
    for (int op = 0; op < dout; ++op) {
      cplx acc = 0.0;
      for (int i = 0; i < din; ++i)
        for (int k = 0; k < din; ++k)
          acc += x.mat().at(k, i) * m.mat().at(o * din + k, op * din + i);
      r.at(o, op) = acc;
    }
  std::vector<Wire> out_ws;
  for (int l : ch.out_wires) out_ws.push_back({l, m.wire_dim(l)});
  return LabeledOp(std::move(out_ws), std::move(r));
}

KrausSet kraus_from_choi(const Channel& ch) {
  std::vector<int> order = ch.out_wires;
  order.insert(order.end(), ch.in_wires.begin(), ch.in_wires.end());
  LabeledOp m = permute_wires(ch.choi, order);
  EigResult eig = herm_eig(m.mat());
  const double lmax = eig.values.empty() ? 0.0 : std::max(0.0, eig.values.front());
  const double cutoff = tol::pinv_rel * std::max(lmax, 1.0);
  const int dout = ch.out_dim();
  const int din = ch.in_dim();

  KrausSet ks;
  for (size_t k = 0; k < eig.values.size(); ++k) {
    double lam = eig.values[k];
    if (lam < -tol::psd) throw numeric_error("kraus_from_choi: Choi is not PSD");
    if (lam <= cutoff) continue;
    std::vector<cplx> col(dout * din);
    for (int i = 0; i < dout * din; ++i)
      col[i] = std::sqrt(lam) * eig.vectors.at(i, static_cast<int>(k));
    CMat kk = devectorize(col, dout, din);
    // Fix global phase: largest-magnitude entry real positive.
    cplx big = 0.0;
    for (const cplx& z : kk.data())
      if (std::abs(z) > std::abs(big)) big = z;
    if (std::abs(big) > 0) kk = kk * (std::abs(big) / big);
    ks.operators.push_back(std::move(kk));
  }
  return ks;
}

bool check_tp(const Channel& ch, double tolerance) {
  LabeledOp red = partial_trace(ch.choi, ch.out_wires);
  LabeledOp target = LabeledOp::identity(red.wires());
  return (red - target).mat().max_abs() <= tolerance;
}

bool check_hp(const Channel& ch, double tolerance) {
  return ch.choi.mat().herm_defect() <= tolerance;
}

bool check_cp(const Channel& ch, double tolerance) { return is_psd(ch.choi, tolerance); }

LabeledOp link(const LabeledOp& a, const LabeledOp& b) {
  std::vector<int> shared;
  for (const Wire& w : a.wires()) {
    int j = b.wire_index(w.label);
    if (j >= 0) {
      if (b.wires()[j].dim != w.dim) throw dim_mismatch("link: shared label with different dims");
      shared.push_back(w.label);
    }
  }
  std::vector<Wire> a_rest, b_rest;
  for (const Wire& w : a.wires())
    if (std::find(shared.begin(), shared.end(), w.label) == shared.end()) a_rest.push_back(w);
  for (const Wire& w : b.wires())
    if (std::find(shared.begin(), shared.end(), w.label) == shared.end()) b_rest.push_back(w);

  if (shared.empty()) return kron(a, b);

  // Bring a to [a_rest, shared], b to [shared, b_rest].
  std::vector<int> a_order, b_order;
  for (const Wire& w : a_rest) a_order.push_back(w.label);
  for (int l : shared) a_order.push_back(l);
  b_order = shared;
  for (const Wire& w : b_rest) b_order.push_back(w.label);
  LabeledOp pa = permute_wires(a, a_order);
  LabeledOp pb = permute_wires(b, b_order);

  long long da = 1, ds = 1, db = 1;
  for (const Wire& w : a_rest) da *= w.dim;
  for (int l : shared) ds *= a.wire_dim(l);
  for (const Wire& w : b_rest) db *= w.dim;

  // Tr_S[(a^{T_S} (x) I_B)(I_A (x) b)] entrywise:
  // result[(ia,ib),(ja,jb)] = sum_{s,s'} a[(ia,s),(ja,s')] * b[(s,ib),(s',jb)]
  CMat r(static_cast<int>(da * db), static_cast<int>(da * db));
  const CMat& am = pa.mat();
  const CMat& bm = pb.mat();
  for (long long ia = 0; ia < da; ++ia)
    for (long long ja = 0; ja < da; ++ja)
      for (long long ib = 0; ib < db; ++ib)
        for (long long jb = 0; jb < db; ++jb) {
          cplx acc = 0.0;
          for (long long s = 0; s < ds; ++s)
            for (long long sp = 0; sp < ds; ++sp)
              acc += am.at(static_cast<int>(ia * ds + s), static_cast<int>(ja * ds + sp)) *
                     bm.at(static_cast<int>(s * db + ib), static_cast<int>(sp * db + jb));
          r.at(static_cast<int>(ia * db + ib), static_cast<int>(ja * db + jb)) = acc;
        }

  std::vector<Wire> wires = a_rest;
  wires.insert(wires.end(), b_rest.begin(), b_rest.end());
  if (wires.empty()) return LabeledOp::scalar(r.at(0, 0));
  return LabeledOp(std::move(wires), std::move(r));
}

Channel identity_channel(Wire in, Wire out) {
  if (in.dim != out.dim) throw dim_mismatch("identity_channel: dims differ");
  KrausSet ks;
  ks.operators.push_back(CMat::identity(in.dim));
  return choi_of_map(ks, in, out);
}

Channel unitary_channel(const CMat& u, Wire in, Wire out) {
  KrausSet ks;
  ks.operators.push_back(u);
  return choi_of_map(ks, in, out);
}

Channel depolarizing_channel(int d, Wire in, Wire out) {
  KrausSet ks;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      CMat k(d, d);
      k.at(i, j) = 1.0 / std::sqrt(static_cast<double>(d));
      ks.operators.push_back(std::move(k));
    }
  return choi_of_map(ks, in, out);
}

Channel random_cptp(Wire in, Wire out, CounterRng& rng) {
  if (in.dim != out.dim) throw dim_mismatch("random_cptp: dims differ");
  const int d = in.dim;
  const int n = d * d;
  CMat g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g.at(i, j) = rng.cgauss();
  // Modified Gram-Schmidt; the first d columns define a Haar-random isometry
  // from the input into output (x) environment.
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < j; ++k) {
      cplx ip = 0;
      for (int i = 0; i < n; ++i) ip += std::conj(g.at(i, k)) * g.at(i, j);
      for (int i = 0; i < n; ++i) g.at(i, j) -= ip * g.at(i, k);
    }
    double nrm = 0;
    for (int i = 0; i < n; ++i) nrm += std::norm(g.at(i, j));
    nrm = std::sqrt(nrm);
    for (int i = 0; i < n; ++i) g.at(i, j) /= nrm;
  }
  KrausSet ks;
  for (int e = 0; e < d; ++e) {
    CMat k(d, d);
    for (int o = 0; o < d; ++o)
      for (int i = 0; i < d; ++i) k.at(o, i) = g.at(o * d + e, i);
    ks.operators.push_back(std::move(k));
  }
  return choi_of_map(ks, in, out);
}

LabeledOp max_ent_projector(Wire a, Wire b) {
  if (a.dim != b.dim) throw dim_mismatch("max_ent_projector: dims differ");
  const int d = a.dim;
  CMat m(d * d, d * d);
  for (int n = 0; n < d; ++n)
    for (int p = 0; p < d; ++p) m.at(n * d + n, p * d + p) = 1.0;
  return LabeledOp({a, b}, std::move(m));
}

LabeledOp unitary_choi_op(const CMat& u, Wire out, Wire in) {
  auto v = vectorize(u);
  return LabeledOp({out, in}, outer(v, v));
}

LabeledOp choi_from_kraus(const std::vector<CMat>& kraus, const std::vector<Wire>& out_wires,
                          const std::vector<Wire>& in_wires) {
  if (kraus.empty()) throw dim_mismatch("choi_from_kraus: empty Kraus set");
  long long dout = 1, din = 1;
  for (const Wire& w : out_wires) dout *= w.dim;
  for (const Wire& w : in_wires) din *= w.dim;
  CMat c(static_cast<int>(dout * din), static_cast<int>(dout * din));
  for (const CMat& k : kraus) {
    if (k.rows() != dout || k.cols() != din)
      throw dim_mismatch("choi_from_kraus: Kraus dimensions do not match wires");
    auto v = vectorize(k);
    c += outer(v, v);
  }
  std::vector<Wire> wires = out_wires;
  wires.insert(wires.end(), in_wires.begin(), in_wires.end());
  return LabeledOp(std::move(wires), std::move(c));
}

}  // namespace combkit
