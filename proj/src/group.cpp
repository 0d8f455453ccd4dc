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

#include "combkit/group.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace combkit {

CMat haar_unitary(int d, CounterRng& rng) {
  if (d < 1) throw dim_mismatch("haar_unitary: d must be >= 1");
  CMat g(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) g.at(i, j) = rng.cgauss();
  // Modified Gram-Schmidt with one re-orthogonalization pass.
  for (int j = 0; j < d; ++j) {
    for (int pass = 0; pass < 2; ++pass)
      for (int k = 0; k < j; ++k) {
        cplx ip = 0;
        for (int i = 0; i < d; ++i) ip += std::conj(g.at(i, k)) * g.at(i, j);
        for (int i = 0; i < d; ++i) g.at(i, j) -= ip * g.at(i, k);
      }
    double nrm = 0;
    for (int i = 0; i < d; ++i) nrm += std::norm(g.at(i, j));
    nrm = std::sqrt(nrm);
    for (int i = 0; i < d; ++i) g.at(i, j) /= nrm;
  }
  return g;
}

CMat haar_unitary(int d, std::uint64_t seed, std::uint64_t index) {
  CounterRng rng = CounterRng::substream(seed, index);
  return haar_unitary(d, rng);
}

CMat haar_isometry(int rows, int cols, CounterRng& rng) {
  if (cols > rows) throw dim_mismatch("haar_isometry: cols > rows");
  CMat u = haar_unitary(rows, rng);
  CMat v(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) v.at(i, j) = u.at(i, j);
  return v;
}

std::vector<int> RepDescriptor::all_labels() const {
  std::vector<int> l;
  for (const RepFactor& f : factors)
    for (const Wire& w : f.wires) l.push_back(w.label);
  return l;
}

RepKind classify(const RepFactor& f) {
  if (f.wires.size() != f.conj.size()) throw dim_mismatch("RepFactor: conj mask size mismatch");
  int n = static_cast<int>(f.wires.size());
  int nc = 0;
  for (bool b : f.conj) nc += b ? 1 : 0;
  for (const Wire& w : f.wires)
    if (w.dim != f.dim()) throw dim_mismatch("RepFactor: wires must share one dimension");
  if (n == 2 && (nc == 0 || nc == 2)) return RepKind::kUU;
  if (n == 2 && nc == 1) return RepKind::kUUstar;
  if (n == 3 && (nc == 1 || nc == 2)) return RepKind::kUUUstar;
  return RepKind::kGeneric;
}

CMat sym_projector(int d) {
  CMat p(d * d, d * d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      p.at(i * d + j, i * d + j) += 0.5;
      p.at(i * d + j, j * d + i) += 0.5;
    }
  return p;
}

CMat antisym_projector(int d) {
  CMat p(d * d, d * d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      p.at(i * d + j, i * d + j) += 0.5;
      p.at(i * d + j, j * d + i) -= 0.5;
    }
  return p;
}

CMat pp_projector(int d) {
  CMat p(d * d, d * d);
  for (int n = 0; n < d; ++n)
    for (int m = 0; m < d; ++m) p.at(n * d + n, m * d + m) = 1.0 / d;
  return p;
}

namespace {

// Blocks of a single factor, matrices in the factor's own wire order.
struct RawBlock {
  std::string name;
  int rep_dim;
  int mult;
  std::vector<CMat> basis;  // mult x mult entries, (i,j) at i*mult+j
};

// alpha/beta/gamma commutant basis for a 3-wire factor whose plain/conj
// pattern has one odd wire. Construction in the canonical order
// (pair0, pair1, odd); the caller permutes into factor order.
std::vector<RawBlock> uuustar_blocks_canonical(int d) {
  const int dd = d * d * d;
  auto ket_alpha = [&](int k, int sign) {
    std::vector<cplx> v(dd, cplx(0, 0));
    const double nrm = 1.0 / std::sqrt(2.0 * (d + sign));
    for (int m = 0; m < d; ++m) {
      v[(m * d + k) * d + m] += nrm;                    // |I>>_{pair0,odd} |k>_pair1
      v[(k * d + m) * d + m] += (sign > 0 ? nrm : -nrm);  // |I>>_{pair1,odd} |k>_pair0
    }
    return v;
  };

  CMat tpp(dd, dd), tpm(dd, dd), tmp(dd, dd), tmm(dd, dd);
  for (int k = 0; k < d; ++k) {
    auto kp = ket_alpha(k, +1);
    auto km = ket_alpha(k, -1);
    for (int i = 0; i < dd; ++i)
      for (int j = 0; j < dd; ++j) {
        tpp.at(i, j) += kp[i] * std::conj(kp[j]);
        tpm.at(i, j) += kp[i] * std::conj(km[j]);
        tmp.at(i, j) += km[i] * std::conj(kp[j]);
        tmm.at(i, j) += km[i] * std::conj(km[j]);
      }
  }
  CMat eye_odd = CMat::identity(d);
  CMat pbeta = kron(sym_projector(d), eye_odd) - tpp;
  CMat pgamma = kron(antisym_projector(d), eye_odd) - tmm;

  std::vector<RawBlock> blocks;
  blocks.push_back({"alpha", d, 2, {tpp, tpm, tmp, tmm}});
  blocks.push_back({"beta", d * (d * d + d - 2) / 2, 1, {pbeta}});
  if (d > 2) blocks.push_back({"gamma", d * (d * d - d - 2) / 2, 1, {pgamma}});
  return blocks;
}

std::vector<RawBlock> factor_blocks_in_factor_order(const RepFactor& f) {
  const int d = f.dim();
  switch (classify(f)) {
    case RepKind::kUU:
      return {{"+", d * (d + 1) / 2, 1, {sym_projector(d)}},
              {"-", d * (d - 1) / 2, 1, {antisym_projector(d)}}};
    case RepKind::kUUstar: {
      CMat pp = pp_projector(d);
      CMat pq = CMat::identity(d * d) - pp;
      return {{"p", 1, 1, {pp}}, {"q", d * d - 1, 1, {pq}}};
    }
    case RepKind::kUUUstar: {
      // Locate the odd wire (the minority of the plain/conj pattern).
      int nc = (f.conj[0] ? 1 : 0) + (f.conj[1] ? 1 : 0) + (f.conj[2] ? 1 : 0);
      bool odd_is_conj = (nc == 1);
      int odd = -1;
      std::vector<int> pair;
      for (int i = 0; i < 3; ++i) {
        if (f.conj[i] == odd_is_conj)
          odd = i;
        else
          pair.push_back(i);
      }
      auto blocks = uuustar_blocks_canonical(d);
      // Canonical order is (pair0, pair1, odd); permute into factor order.
      std::vector<Wire> canon = {{0, d}, {1, d}, {2, d}};
      std::vector<int> order(3);
      order[pair[0]] = 0;
      order[pair[1]] = 1;
      order[odd] = 2;
      // order[i] is the canonical slot sitting at factor position i.
      std::vector<int> perm_labels = {order[0], order[1], order[2]};
      bool trivial = perm_labels == std::vector<int>{0, 1, 2};
      if (!trivial) {
        for (RawBlock& b : blocks)
          for (CMat& m : b.basis)
            m = permute_wires(LabeledOp(canon, m), perm_labels).mat();
      }
      return blocks;
    }
    default:
      throw unsupported_rep(
          "representation factor is not one of U(x)U, U(x)U*, U(x)U(x)U*; "
          "use commutant_decompose");
  }
}

struct FactorPlan {
  std::vector<int> labels;  // factor wire labels in factor order
  std::vector<RawBlock> blocks;
  long long dim_f = 1;
};

FactorPlan plan_factor(const RepFactor& f) {
  FactorPlan p;
  if (f.wires.size() == 1) {
    // Commutant of an irreducible defining (or conjugate) action: scalars.
    p.blocks = {{"triv", f.dim(), 1, {CMat::identity(f.dim())}}};
  } else {
    p.blocks = factor_blocks_in_factor_order(f);
  }
  for (const Wire& w : f.wires) {
    p.labels.push_back(w.label);
    p.dim_f *= w.dim;
  }
  return p;
}

// Conditional expectation onto the factor commutant:
//   E(op) = sum_{nu,i,j} (1/d_nu) T^{nu,i,j} (x) Tr_F[(T^{nu,j,i} (x) I) op]
LabeledOp factor_twirl(const LabeledOp& op, const RepFactor& f) {
  FactorPlan plan = plan_factor(f);
  for (int l : plan.labels)
    if (!op.has_label(l)) throw dim_mismatch("twirl_exact: representation wire missing from operator");

  std::vector<int> order = plan.labels;
  std::vector<Wire> rest;
  for (const Wire& w : op.wires())
    if (std::find(plan.labels.begin(), plan.labels.end(), w.label) == plan.labels.end()) {
      order.push_back(w.label);
      rest.push_back(w);
    }
  LabeledOp p = permute_wires(op, order);
  const long long df = plan.dim_f;
  long long db = 1;
  for (const Wire& w : rest) db *= w.dim;

  CMat out(static_cast<int>(df * db), static_cast<int>(df * db));
  CMat s(static_cast<int>(db), static_cast<int>(db));
  for (const RawBlock& b : plan.blocks) {
    for (int i = 0; i < b.mult; ++i)
      for (int j = 0; j < b.mult; ++j) {
        const CMat& tij = b.basis[static_cast<size_t>(i) * b.mult + j];
        const CMat& tji = b.basis[static_cast<size_t>(j) * b.mult + i];
        // s[b,b'] = sum_{f,g} tji[f,g] * p[(g,b),(f,b')]
        for (long long x = 0; x < db; ++x)
          for (long long y = 0; y < db; ++y) {
            cplx acc = 0.0;
            for (int fg = 0; fg < df; ++fg)
              for (int gg = 0; gg < df; ++gg) {
                const cplx t = tji.at(fg, gg);
                if (t == cplx(0.0, 0.0)) continue;
                acc += t * p.mat().at(static_cast<int>(gg * db + x), static_cast<int>(fg * db + y));
              }
            s.at(static_cast<int>(x), static_cast<int>(y)) = acc;
          }
        const double w = 1.0 / b.rep_dim;
        for (int fr = 0; fr < df; ++fr)
          for (int fc = 0; fc < df; ++fc) {
            const cplx t = tij.at(fr, fc) * w;
            if (t == cplx(0.0, 0.0)) continue;
            for (long long x = 0; x < db; ++x)
              for (long long y = 0; y < db; ++y)
                out.at(static_cast<int>(fr * db + x), static_cast<int>(fc * db + y)) +=
                    t * s.at(static_cast<int>(x), static_cast<int>(y));
          }
      }
  }
  std::vector<Wire> wires;
  for (int l : plan.labels) wires.push_back({l, op.wire_dim(l)});
  wires.insert(wires.end(), rest.begin(), rest.end());
  LabeledOp res(std::move(wires), std::move(out));
  return permute_wires(res, op.labels());
}

}  // namespace

std::vector<IsotypicBlock> projectors(const RepDescriptor& rep) {
  if (rep.factors.size() != 1)
    throw unsupported_rep("projectors: expected a single representation factor");
  const RepFactor& f = rep.factors.front();
  FactorPlan plan = plan_factor(f);
  std::vector<IsotypicBlock> out;
  for (const RawBlock& b : plan.blocks) {
    IsotypicBlock ib;
    ib.name = b.name;
    ib.rep_dim = b.rep_dim;
    ib.mult = b.mult;
    CMat proj(static_cast<int>(plan.dim_f), static_cast<int>(plan.dim_f));
    for (int i = 0; i < b.mult; ++i) proj += b.basis[static_cast<size_t>(i) * b.mult + i];
    ib.projector = LabeledOp(f.wires, std::move(proj));
    if (b.mult > 1)
      for (const CMat& t : b.basis) ib.intertwiners.push_back(LabeledOp(f.wires, t));
    out.push_back(std::move(ib));
  }
  return out;
}

LabeledOp twirl_exact(const LabeledOp& op, const RepDescriptor& rep) {
  LabeledOp cur = op;
  for (const RepFactor& f : rep.factors) cur = factor_twirl(cur, f);
  return cur;
}

CMat rep_sample(const RepDescriptor& rep, const std::vector<Wire>& target_wires, CounterRng& rng) {
  // Build per-wire single unitaries, identity on uncovered wires.
  std::vector<CMat> per_wire;
  per_wire.reserve(target_wires.size());
  std::vector<const RepFactor*> owner(target_wires.size(), nullptr);
  std::vector<bool> conj_flag(target_wires.size(), false);
  std::vector<CMat> factor_u;
  for (const RepFactor& f : rep.factors) factor_u.push_back(haar_unitary(f.dim(), rng));

  for (size_t t = 0; t < target_wires.size(); ++t) {
    const Wire& w = target_wires[t];
    const CMat* u = nullptr;
    bool cj = false;
    for (size_t fi = 0; fi < rep.factors.size(); ++fi) {
      const RepFactor& f = rep.factors[fi];
      for (size_t k = 0; k < f.wires.size(); ++k)
        if (f.wires[k].label == w.label) {
          u = &factor_u[fi];
          cj = f.conj[k];
        }
    }
    if (u)
      per_wire.push_back(cj ? u->conj() : *u);
    else
      per_wire.push_back(CMat::identity(w.dim));
  }
  CMat full = per_wire.front();
  for (size_t t = 1; t < per_wire.size(); ++t) full = kron(full, per_wire[t]);
  return full;
}

McTwirl twirl_mc(const LabeledOp& op, const RepDescriptor& rep, int n_samples, std::uint64_t seed) {
  if (n_samples < 2) throw dim_mismatch("twirl_mc: n_samples must be >= 2");
  const int n = op.dim();
  std::vector<double> sum_re(static_cast<size_t>(n) * n, 0.0), sum_im(sum_re.size(), 0.0);
  std::vector<double> sq_re(sum_re.size(), 0.0), sq_im(sum_re.size(), 0.0);
  CounterRng rng = CounterRng::substream(seed, 0);
  for (int s = 0; s < n_samples; ++s) {
    CMat w = rep_sample(rep, op.wires(), rng);
    CMat x = w * op.mat() * w.adjoint();
    for (size_t i = 0; i < x.data().size(); ++i) {
      const double re = x.data()[i].real(), im = x.data()[i].imag();
      sum_re[i] += re;
      sum_im[i] += im;
      sq_re[i] += re * re;
      sq_im[i] += im * im;
    }
  }
  CMat mean(n, n);
  double se_max = 0.0;
  for (size_t i = 0; i < sum_re.size(); ++i) {
    const double mre = sum_re[i] / n_samples, mim = sum_im[i] / n_samples;
    mean.data()[i] = cplx(mre, mim);
    const double vre = std::max(0.0, sq_re[i] / n_samples - mre * mre);
    const double vim = std::max(0.0, sq_im[i] / n_samples - mim * mim);
    se_max = std::max(se_max, std::sqrt((vre + vim) / n_samples));
  }
  return {LabeledOp(op.wires(), std::move(mean)), se_max, n_samples};
}

std::vector<NumericalBlock> commutant_decompose(
    const std::function<CMat(CounterRng&)>& rep_sampler, int dim, std::uint64_t seed,
    const CommutantDecomposeOptions& opts) {
  CounterRng seed_rng = CounterRng::substream(seed, 1);

  auto mc_average = [&](const CMat& x, int n, std::uint64_t stream) {
    CounterRng rng = CounterRng::substream(seed, 100 + stream);
    CMat acc(dim, dim);
    for (int s = 0; s < n; ++s) {
      CMat u = rep_sampler(rng);
      acc += u * x * u.adjoint();
    }
    acc = acc * cplx(1.0 / n, 0.0);
    // Hermitize.
    return (acc + acc.adjoint()) * cplx(0.5, 0.0);
  };
  auto commutator_norm = [&](const CMat& x, std::uint64_t stream) {
    CounterRng rng = CounterRng::substream(seed, 5000 + stream);
    double worst = 0.0;
    for (int s = 0; s < 50; ++s) {
      CMat u = rep_sampler(rng);
      worst = std::max(worst, commutator(x, u).frobenius_norm());
    }
    return worst / std::max(1e-300, x.frobenius_norm());
  };

  auto twirl_to_commutant = [&](std::uint64_t which) {
    CMat x(dim, dim);
    for (int i = 0; i < dim; ++i)
      for (int j = i; j < dim; ++j) {
        cplx z = seed_rng.cgauss();
        if (i == j) z = z.real();
        x.at(i, j) = z;
        x.at(j, i) = std::conj(z);
      }
    x = mc_average(x, opts.first_pass_samples, which * 1000);
    for (int pass = 1; pass < opts.max_passes; ++pass) {
      if (commutator_norm(x, which * 1000 + pass) <= opts.commutator_target) break;
      x = mc_average(x, opts.refine_samples, which * 1000 + pass);
    }
    if (commutator_norm(x, which * 1000 + 999) > opts.commutator_target)
      throw numeric_error("commutant_decompose: twirl did not reach commutator target");
    return x;
  };

  CMat x = twirl_to_commutant(0);
  EigResult eig = herm_eig(x.data().size() ? x : CMat::identity(dim), 1e-5);
  const double spread = std::max(1e-300, std::abs(eig.values.front()) + std::abs(eig.values.back()));
  const double thr = opts.cluster_rel_gap * spread;

  std::vector<std::pair<int, int>> clusters;  // [begin, end)
  int begin = 0;
  for (int i = 1; i <= dim; ++i) {
    if (i == dim || eig.values[i - 1] - eig.values[i] > thr) {
      clusters.push_back({begin, i});
      begin = i;
    }
  }
  // Refuse ill-separated spectra: inter-cluster gaps must clear the threshold
  // decisively.
  for (size_t c = 1; c < clusters.size(); ++c) {
    double gap = eig.values[clusters[c - 1].second - 1] - eig.values[clusters[c].first];
    if (gap < 3.0 * thr)
      throw numeric_error("commutant_decompose: eigenvalue cluster gap below threshold, refusing");
  }

  std::vector<CMat> q;  // cluster projectors
  for (auto [b, e] : clusters) {
    CMat p(dim, dim);
    for (int k = b; k < e; ++k)
      for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j)
          p.at(i, j) += eig.vectors.at(i, k) * std::conj(eig.vectors.at(j, k));
    q.push_back(std::move(p));
  }

  // Group clusters into isotypic components using a second generic commutant
  // element: Q_i Y Q_j is nonzero (full rank) exactly within a component.
  CMat y = twirl_to_commutant(1);
  const int nc = static_cast<int>(clusters.size());
  std::vector<int> parent(nc);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int a) { return parent[a] == a ? a : parent[a] = find(parent[a]); };
  for (int i = 0; i < nc; ++i)
    for (int j = i + 1; j < nc; ++j) {
      CMat link_ij = q[i] * y * q[j];
      if (link_ij.frobenius_norm() > 1e-3 * y.frobenius_norm() / dim) {
        int sz_i = clusters[i].second - clusters[i].first;
        CMat g = link_ij * link_ij.adjoint();
        if (psd_rank(g, 1e-6) != sz_i)
          throw numeric_error("commutant_decompose: intertwiner candidate has unexpected rank");
        parent[find(i)] = find(j);
      }
    }

  std::vector<NumericalBlock> out;
  for (int r = 0; r < nc; ++r) {
    if (find(r) != r) continue;
    NumericalBlock nb;
    nb.projector = CMat(dim, dim);
    nb.mult = 0;
    nb.rep_dim = 0;
    for (int i = 0; i < nc; ++i) {
      if (find(i) != r) continue;
      int sz = clusters[i].second - clusters[i].first;
      if (nb.rep_dim != 0 && nb.rep_dim != sz)
        throw numeric_error("commutant_decompose: grouped clusters of unequal size");
      nb.rep_dim = sz;
      nb.mult += 1;
      nb.projector += q[i];
    }
    out.push_back(std::move(nb));
  }
  std::sort(out.begin(), out.end(), [](const NumericalBlock& a, const NumericalBlock& b) {
    return a.rep_dim * a.mult > b.rep_dim * b.mult;
  });
  return out;
}

CMat haar_average_tensor_rep_d2(const CMat& op, int n_wires, const std::vector<bool>& conj_mask) {
  const int d = 2;
  long long dn = 1;
  for (int i = 0; i < n_wires; ++i) dn *= d;
  if (op.rows() != dn) throw dim_mismatch("haar_average_tensor_rep_d2: dimension mismatch");
  if (static_cast<int>(conj_mask.size()) != n_wires)
    throw dim_mismatch("haar_average_tensor_rep_d2: mask size mismatch");

  // Map the conjugate wires to plain ones with C = [[0,1],[-1,0]] (U* = det(U)^-1 C U C^-1;
  // the determinant phases cancel under conjugation).
  CMat c2(2, 2);
  c2.at(0, 1) = 1.0;
  c2.at(1, 0) = -1.0;
  CMat cfull = CMat::identity(1);
  for (int i = 0; i < n_wires; ++i) cfull = kron(cfull, conj_mask[i] ? c2 : CMat::identity(2));
  CMat x = cfull.adjoint() * op * cfull;

  // Permutation operators of S_n on (C^2)^(x)n.
  std::vector<int> perm(n_wires);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<std::vector<int>> perms;
  do {
    perms.push_back(perm);
  } while (std::next_permutation(perm.begin(), perm.end()));
  const int np = static_cast<int>(perms.size());

  auto perm_op = [&](const std::vector<int>& s) {
    // |i_0 ... i_{n-1}> -> |i_{s^-1(0)} ... >
    CMat p(static_cast<int>(dn), static_cast<int>(dn));
    for (long long col = 0; col < dn; ++col) {
      std::vector<int> dig(n_wires);
      long long t = col;
      for (int i = n_wires - 1; i >= 0; --i) {
        dig[i] = static_cast<int>(t % d);
        t /= d;
      }
      long long row = 0;
      for (int i = 0; i < n_wires; ++i) row = row * d + dig[s[i]];
      p.at(static_cast<int>(row), static_cast<int>(col)) = 1.0;
    }
    return p;
  };
  std::vector<CMat> pops;
  pops.reserve(np);
  for (const auto& s : perms) pops.push_back(perm_op(s));

  // Gram matrix G_{ts} = Tr[P_t^dag P_s] and coefficient solve via pinv.
  CMat gram(np, np);
  for (int t = 0; t < np; ++t)
    for (int s = 0; s < np; ++s) gram.at(t, s) = (pops[t].adjoint() * pops[s]).trace();
  CMat gram_pinv = pinv_on_support(gram);

  std::vector<cplx> rhs(np);
  for (int t = 0; t < np; ++t) rhs[t] = (pops[t].adjoint() * x).trace();
  std::vector<cplx> coef = gram_pinv.apply(rhs);

  CMat avg(static_cast<int>(dn), static_cast<int>(dn));
  for (int s = 0; s < np; ++s)
    if (std::abs(coef[s]) > 0) avg += pops[s] * coef[s];
  return cfull * avg * cfull.adjoint();
}

}  // namespace combkit
