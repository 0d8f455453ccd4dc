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

#include "combkit/comb.hpp"

#include <algorithm>
#include <cmath>

namespace combkit {

namespace {

int dim_of(const LabeledOp& op, const std::vector<int>& labels) {
  int d = 1;
  for (int l : labels) d *= op.wire_dim(l);
  return d;
}

// Canonical wire order of the k-tooth prefix: in_1, out_1, ..., in_k, out_k.
std::vector<int> prefix_order(const std::vector<Tooth>& teeth, size_t k) {
  std::vector<int> order;
  for (size_t t = 0; t < k; ++t) {
    order.insert(order.end(), teeth[t].in.begin(), teeth[t].in.end());
    order.insert(order.end(), teeth[t].out.begin(), teeth[t].out.end());
  }
  return order;
}

double identity_factor_residual(const LabeledOp& lhs, const std::vector<int>& id_labels,
                                const LabeledOp& rest) {
  LabeledOp target = rest;
  if (!id_labels.empty()) {
    std::vector<Wire> idw;
    for (int l : id_labels) idw.push_back({l, lhs.wire_dim(l)});
    if (rest.wire_count() == 0)
      target = LabeledOp(idw, CMat::identity(dim_of(lhs, id_labels)) * rest.mat().at(0, 0));
    else
      target = kron(LabeledOp::identity(idw), rest);
  }
  LabeledOp diff = lhs - align_like(target, lhs);
  CMat h = (diff.mat() + diff.mat().adjoint()) * cplx(0.5, 0.0);
  double herm_part = herm_op_norm(h);
  double skew = (diff.mat() - diff.mat().adjoint()).max_abs();
  return std::max(herm_part, skew);
}

}  // namespace

CombCheck check_comb(const LabeledOp& choi, const std::vector<Tooth>& teeth, double tolerance,
                     bool check_psd) {
  CombCheck res;
  {
    std::vector<int> all;
    for (const Tooth& t : teeth) {
      all.insert(all.end(), t.in.begin(), t.in.end());
      all.insert(all.end(), t.out.begin(), t.out.end());
    }
    std::vector<int> got = choi.labels();
    std::sort(all.begin(), all.end());
    std::sort(got.begin(), got.end());
    if (all != got) {
      res.message = "teeth labels do not match choi wires";
      return res;
    }
  }
  res.psd_ok = !check_psd || is_psd(choi, tol::psd);
  if (!res.psd_ok) {
    res.message = "choi is not PSD";
    return res;
  }

  LabeledOp r = choi;
  bool ok = true;
  for (int k = static_cast<int>(teeth.size()) - 1; k >= 0; --k) {
    const Tooth& t = teeth[static_cast<size_t>(k)];
    LabeledOp traced = t.out.empty() ? r : partial_trace(r, t.out);
    int din = dim_of(choi, t.in);
    LabeledOp next = t.in.empty() ? traced : partial_trace(traced, t.in);
    next = next * cplx(1.0 / din, 0.0);
    double resid = identity_factor_residual(traced, t.in, next);
    res.residuals.push_back(resid);
    if (resid > tolerance) {
      ok = false;
      res.message = "normalization residual " + std::to_string(resid) + " at tooth " +
                    std::to_string(k + 1);
    }
    r = next;
    res.reduced.push_back(r);
  }
  if (r.dim() != 1 || std::abs(r.mat().at(0, 0) - cplx(1.0, 0.0)) > tolerance) {
    ok = false;
    if (res.message.empty()) res.message = "R^(0) != 1";
  }
  res.ok = ok;
  return res;
}

namespace {

struct ReducedSpectra {
  std::vector<double> values;
  CMat vectors;
  int rank = 0;
};

ReducedSpectra spectra_of(const LabeledOp& r_canonical) {
  ReducedSpectra s;
  EigResult e = herm_eig(r_canonical.mat());
  s.values = e.values;
  s.vectors = e.vectors;
  double lmax = e.values.empty() ? 0.0 : std::max(0.0, e.values.front());
  const double cutoff = tol::pinv_rel * std::max(lmax, 1e-300);
  for (double v : e.values)
    if (v > cutoff) ++s.rank;
  return s;
}

}  // namespace

IsometryChain realize_comb(const Comb& comb, double tolerance) {
  if (comb.flavor != CombFlavor::deterministic)
    throw numeric_error("realize_comb: deterministic comb required");
  const auto& teeth = comb.teeth;
  const int n = static_cast<int>(teeth.size());
  LabeledOp canon = permute_wires(comb.choi, prefix_order(teeth, teeth.size()));
  CombCheck chk = check_comb(canon, teeth, tolerance, true);
  if (!chk.ok) throw numeric_error("realize_comb: not a deterministic comb: " + chk.message);

  std::vector<LabeledOp> rk(static_cast<size_t>(n));
  rk[static_cast<size_t>(n - 1)] = canon;
  // chk.reduced holds R^(N-1), ..., R^(0) already in canonical prefix order.
  for (int k = n - 1; k >= 1; --k)
    rk[static_cast<size_t>(k - 1)] = chk.reduced[static_cast<size_t>(n - 1 - k)];

  std::vector<ReducedSpectra> sp;
  sp.reserve(rk.size());
  for (const LabeledOp& r : rk) sp.push_back(spectra_of(r));

  IsometryChain chain;
  int prev_rank = 1;
  for (int k = 1; k <= n; ++k) {
    const Tooth& t = teeth[static_cast<size_t>(k - 1)];
    const int din = dim_of(canon, t.in);
    const int dout = dim_of(canon, t.out);
    const ReducedSpectra& cur = sp[static_cast<size_t>(k - 1)];
    const int rk_rank = cur.rank;
    const int dprev = (k == 1) ? 1 : rk[static_cast<size_t>(k - 2)].dim();

    // V[(m, j), (i, a)] = sum_x sqrt(l_j) e_j[(x, i, m)] l_a^{-1/2} conj(f_a[x])
    // with e = eigvecs of R^(k), f = eigvecs of R^(k-1), canonical order.
    CMat v(dout * rk_rank, din * prev_rank);
    for (int m = 0; m < dout; ++m)
      for (int j = 0; j < rk_rank; ++j) {
        const double sl = std::sqrt(cur.values[static_cast<size_t>(j)]);
        for (int i = 0; i < din; ++i)
          for (int a = 0; a < prev_rank; ++a) {
            cplx acc = 0.0;
            if (k == 1) {
              acc = cur.vectors.at(i * dout + m, j);
            } else {
              const ReducedSpectra& prev = sp[static_cast<size_t>(k - 2)];
              const double la = 1.0 / std::sqrt(prev.values[static_cast<size_t>(a)]);
              for (int x = 0; x < dprev; ++x)
                acc += cur.vectors.at((x * din + i) * dout + m, j) * la *
                       std::conj(prev.vectors.at(x, a));
            }
            v.at(m * rk_rank + j, i * prev_rank + a) = sl * acc;
          }
      }
    chain.isometries.push_back(std::move(v));
    chain.ancilla_dims.push_back(rk_rank);
    prev_rank = rk_rank;
  }
  return chain;
}

LabeledOp chain_choi(const IsometryChain& chain, const std::vector<Tooth>& teeth,
                     const LabeledOp& reference_choi) {
  int anc_base = 1;
  for (const Wire& w : reference_choi.wires()) anc_base = std::max(anc_base, w.label + 1);

  LabeledOp total = LabeledOp::scalar(1.0);
  int prev_anc_label = -1;
  int prev_anc_dim = 1;
  for (size_t k = 0; k < chain.isometries.size(); ++k) {
    const Tooth& t = teeth[k];
    const int anc_label = anc_base + static_cast<int>(k);
    const int anc_dim = chain.ancilla_dims[k];

    // Choi of the isometric step: |V>><<V| on (out..., anc_k, in..., anc_{k-1}).
    std::vector<Wire> wires;
    for (int l : t.out) wires.push_back({l, reference_choi.wire_dim(l)});
    wires.push_back({anc_label, anc_dim});
    for (int l : t.in) wires.push_back({l, reference_choi.wire_dim(l)});
    if (k > 0) wires.push_back({prev_anc_label, prev_anc_dim});

    auto vecd = vectorize(chain.isometries[k]);
    LabeledOp step(wires, outer(vecd, vecd));
    total = link(total, step);
    prev_anc_label = anc_label;
    prev_anc_dim = anc_dim;
  }
  LabeledOp traced = partial_trace(total, {prev_anc_label});
  return align_like(traced, reference_choi);
}

Stinespring stinespring(const Channel& ch, double tolerance) {
  if (!check_tp(ch, tolerance)) throw numeric_error("stinespring: channel is not trace preserving");
  std::vector<int> order = ch.in_wires;
  order.insert(order.end(), ch.out_wires.begin(), ch.out_wires.end());
  Comb comb{permute_wires(ch.choi, order), {Tooth{ch.in_wires, ch.out_wires}},
            CombFlavor::deterministic};
  IsometryChain realized = realize_comb(comb, tolerance);
  return {realized.isometries.front(), realized.ancilla_dims.front()};
}

InstrumentRealization realize_instrument(const std::vector<Channel>& elements, double tolerance) {
  if (elements.empty()) throw dim_mismatch("realize_instrument: no elements");
  Channel sum = elements.front();
  for (size_t i = 1; i < elements.size(); ++i)
    sum.choi = sum.choi + align_like(elements[i].choi, sum.choi);
  if (!check_tp(sum, tolerance))
    throw numeric_error("realize_instrument: element sum is not trace preserving");

  std::vector<int> order = sum.in_wires;
  order.insert(order.end(), sum.out_wires.begin(), sum.out_wires.end());
  LabeledOp c = permute_wires(sum.choi, order);
  EigResult eig = herm_eig(c.mat());
  const double cutoff = tol::pinv_rel * std::max(eig.values.front(), 1e-300);
  int rank = 0;
  for (double v : eig.values)
    if (v > cutoff) ++rank;

  const int din = sum.in_dim(), dout = sum.out_dim();
  InstrumentRealization out;
  out.ancilla_dim = rank;
  out.isometry = CMat(dout * rank, din);
  for (int m = 0; m < dout; ++m)
    for (int j = 0; j < rank; ++j) {
      const double sl = std::sqrt(eig.values[static_cast<size_t>(j)]);
      for (int i = 0; i < din; ++i)
        out.isometry.at(m * rank + j, i) = sl * eig.vectors.at(i * dout + m, j);
    }
  for (const Channel& e : elements) {
    LabeledOp ec = permute_wires(e.choi, order);
    CMat p(rank, rank);
    for (int j = 0; j < rank; ++j)
      for (int kk = 0; kk < rank; ++kk) {
        // P[j,k] = <e_k| E |e_j> / sqrt(l_j l_k)
        cplx acc = 0.0;
        for (int x = 0; x < din * dout; ++x)
          for (int y = 0; y < din * dout; ++y)
            acc += std::conj(eig.vectors.at(x, kk)) * ec.mat().at(x, y) * eig.vectors.at(y, j);
        p.at(j, kk) = acc / std::sqrt(eig.values[static_cast<size_t>(j)] *
                                      eig.values[static_cast<size_t>(kk)]);
      }
    out.povm.push_back(std::move(p));
  }
  return out;
}

CombCheck check_tester(const Tester& tester, double tolerance) {
  if (tester.elements.empty()) {
    CombCheck res;
    res.message = "empty tester";
    return res;
  }
  LabeledOp sum = tester.elements.front();
  for (size_t i = 1; i < tester.elements.size(); ++i)
    sum = sum + align_like(tester.elements[i], sum);
  for (const LabeledOp& e : tester.elements)
    if (!is_psd(e, tol::psd)) {
      CombCheck res;
      res.message = "tester element not PSD";
      return res;
    }
  return check_comb(sum, tester.teeth, tolerance, true);
}

TwoTesterRealization realize_2tester(const Tester& tester, int ancilla_label, double tolerance) {
  if (tester.teeth.size() != 2 || tester.teeth[0].out.size() != 1 || !tester.teeth[0].in.empty() ||
      tester.teeth[1].in.size() != 1 || !tester.teeth[1].out.empty())
    throw dim_mismatch("realize_2tester: expected teeth ({} -> w1), (w2 -> {})");
  CombCheck chk = check_tester(tester, tolerance);
  if (!chk.ok) throw numeric_error("realize_2tester: tester normalization failed: " + chk.message);

  const int w1 = tester.teeth[0].out[0];
  const int w2 = tester.teeth[1].in[0];
  const int d1 = tester.elements[0].wire_dim(w1);
  const int d2 = tester.elements[0].wire_dim(w2);

  LabeledOp sum = tester.elements.front();
  for (size_t i = 1; i < tester.elements.size(); ++i)
    sum = sum + align_like(tester.elements[i], sum);
  LabeledOp rho = partial_trace(sum, {w2});
  rho = rho * cplx(1.0 / d2, 0.0);
  EigResult re = herm_eig(rho.mat());
  const double cutoff = tol::pinv_rel * std::max(re.values.front(), 1e-300);
  int rank = 0;
  for (double v : re.values)
    if (v > cutoff) ++rank;

  TwoTesterRealization out;
  out.ancilla_dim = rank;
  out.ancilla_label = ancilla_label;

  // |sqrt(rho)>> compressed to the support: s[(n, j)] = sqrt(l_j) f_j[n].
  std::vector<cplx> s(static_cast<size_t>(d1) * rank);
  for (int n = 0; n < d1; ++n)
    for (int j = 0; j < rank; ++j)
      s[static_cast<size_t>(n) * rank + j] =
          std::sqrt(re.values[static_cast<size_t>(j)]) * re.vectors.at(n, j);
  out.input_state = LabeledOp({{w1, d1}, {ancilla_label, rank}}, outer(s, s));

  // POVM on (w2, ancilla): P_i = rho^{-1/2*} R_i^* rho^{-1/2*}, compressed
  // along the conjugate eigenbasis of rho.
  for (const LabeledOp& el : tester.elements) {
    LabeledOp e = permute_wires(el, {w1, w2});
    CMat p(d2 * rank, d2 * rank);
    for (int o = 0; o < d2; ++o)
      for (int j = 0; j < rank; ++j)
        for (int op2 = 0; op2 < d2; ++op2)
          for (int kk = 0; kk < rank; ++kk) {
            cplx acc = 0.0;
            for (int x = 0; x < d1; ++x)
              for (int y = 0; y < d1; ++y)
                acc += re.vectors.at(x, j) * std::conj(e.mat().at(x * d2 + o, y * d2 + op2)) *
                       std::conj(re.vectors.at(y, kk));
            p.at(o * rank + j, op2 * rank + kk) =
                acc / std::sqrt(re.values[static_cast<size_t>(j)] *
                                re.values[static_cast<size_t>(kk)]);
          }
    out.povm.push_back(LabeledOp({{w2, d2}, {ancilla_label, rank}}, std::move(p)));
  }
  return out;
}

double born(const LabeledOp& tester_element, const LabeledOp& comb_choi) {
  LabeledOp t = align_like(tester_element, comb_choi);
  // Tr[R T^t] = sum_{x,y} R[x,y] T[x,y]
  cplx acc = 0.0;
  const auto& rd = comb_choi.mat().data();
  const auto& td = t.mat().data();
  for (size_t i = 0; i < rd.size(); ++i) acc += rd[i] * td[i];
  double p = acc.real();
  if (p < -1e-10 || p > 1.0 + 1e-10)
    throw numeric_error("born: probability outside [0,1] beyond tolerance");
  return std::min(1.0, std::max(0.0, p));
}

bool dominated_by(const LabeledOp& r, const LabeledOp& s, double tolerance) {
  if (!is_psd(r, tolerance)) return false;
  LabeledOp diff = align_like(s, r) - r;
  return is_psd(diff, tolerance);
}

}  // namespace combkit
