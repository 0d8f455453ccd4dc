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

#include "combkit/verify.hpp"

#include <algorithm>
#include <cmath>

#include "combkit/group.hpp"

namespace combkit {

namespace {

// <v|rho|v> * lam for a rank-one sigma = lam |v><v|; exact, no sqrt noise.
double pure_fidelity(const CMat& rho, const EigResult& sig_eig) {
  const int n = rho.rows();
  cplx acc = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      acc += std::conj(sig_eig.vectors.at(i, 0)) * rho.at(i, j) * sig_eig.vectors.at(j, 0);
  return std::max(0.0, acc.real() * sig_eig.values.front());
}

}  // namespace

double state_fidelity(const CMat& rho, const CMat& sigma) {
  EigResult se = herm_eig(sigma);
  if (!se.values.empty() &&
      (se.values.size() == 1 || std::abs(se.values[1]) <= 1e-12 * std::max(se.values[0], 1e-300)))
    return std::min(1.0, pure_fidelity(rho, se));
  EigResult re = herm_eig(rho);
  if (!re.values.empty() &&
      (re.values.size() == 1 || std::abs(re.values[1]) <= 1e-12 * std::max(re.values[0], 1e-300)))
    return std::min(1.0, pure_fidelity(sigma, re));

  CMat s = mat_sqrt_psd(sigma);
  CMat m = s * rho * s;
  EigResult e = herm_eig((m + m.adjoint()) * cplx(0.5, 0.0));
  const double cutoff = 1e-13 * std::max(e.values.empty() ? 0.0 : e.values.front(), 1e-300);
  double acc = 0.0;
  for (double lam : e.values)
    if (lam > cutoff) acc += std::sqrt(lam);
  return std::min(1.0, acc * acc);
}

double channel_fidelity(const Channel& a, const Channel& b) {
  if (a.in_dim() != b.in_dim() || a.out_dim() != b.out_dim())
    throw dim_mismatch("channel_fidelity: dimension mismatch");
  LabeledOp bc = align_like(b.choi, a.choi);
  const double da = a.in_dim();
  return state_fidelity(a.choi.mat() * (1.0 / da), bc.mat() * (1.0 / da));
}

AvgFidelityCheck avg_state_fidelity_check(const Channel& a, const CMat& u, int n_samples,
                                          std::uint64_t seed) {
  const int d = a.in_dim();
  Channel uc = unitary_channel(u, {a.in_wires[0], d}, {a.out_wires[0], d});
  AvgFidelityCheck out;
  out.rhs = d / (d + 1.0) * channel_fidelity(a, uc) + 1.0 / (d + 1.0);

  McEstimate est = mc_mean(n_samples, seed, [&](CounterRng& rng) {
    CMat v = haar_unitary(d, rng);
    std::vector<cplx> phi(d);
    for (int i = 0; i < d; ++i) phi[i] = v.at(i, 0);
    LabeledOp in({{a.in_wires[0], d}}, outer(phi, phi));
    LabeledOp outst = apply_channel(a, in);
    auto target = u.apply(phi);
    cplx f = 0.0;
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) f += std::conj(target[i]) * outst.mat().at(i, j) * target[j];
    return f.real();
  });
  out.lhs_mean = est.mean;
  out.lhs_stderr = est.stderr;
  out.samples = est.samples;
  return out;
}

double povm_fidelity(const std::vector<CMat>& p, const std::vector<CMat>& q) {
  if (p.size() != q.size()) throw dim_mismatch("povm_fidelity: outcome count mismatch");
  if (p.empty()) throw dim_mismatch("povm_fidelity: empty POVMs");
  const int d = p.front().rows();
  cplx acc = 0.0;
  for (size_t i = 0; i < p.size(); ++i) {
    if (p[i].rows() != d || q[i].rows() != d) throw dim_mismatch("povm_fidelity: dim mismatch");
    acc += (p[i] * q[i]).trace();
  }
  return acc.real() / d;
}

McEstimate mc_mean(int n_samples, std::uint64_t seed,
                   const std::function<double(CounterRng&)>& draw) {
  CounterRng rng = CounterRng::substream(seed, 0);
  double sum = 0.0, sq = 0.0;
  for (int i = 0; i < n_samples; ++i) {
    double v = draw(rng);
    sum += v;
    sq += v * v;
  }
  McEstimate e;
  e.samples = n_samples;
  e.mean = sum / n_samples;
  double var = std::max(0.0, sq / n_samples - e.mean * e.mean);
  e.stderr = std::sqrt(var / n_samples);
  return e;
}

McEstimate mc_ratio(int n_samples, std::uint64_t seed,
                    const std::function<std::pair<double, double>(CounterRng&)>& draw) {
  CounterRng rng = CounterRng::substream(seed, 0);
  double sw = 0, swv = 0, sww = 0, swvwv = 0, swwv = 0;
  for (int i = 0; i < n_samples; ++i) {
    auto [w, v] = draw(rng);
    const double wv = w * v;
    sw += w;
    swv += wv;
    sww += w * w;
    swvwv += wv * wv;
    swwv += w * wv;
  }
  const double n = n_samples;
  const double mw = sw / n, mwv = swv / n;
  McEstimate e;
  e.samples = n_samples;
  e.mean = mwv / mw;
  // Delta method for R = E[wv]/E[w].
  const double var_wv = std::max(0.0, swvwv / n - mwv * mwv);
  const double var_w = std::max(0.0, sww / n - mw * mw);
  const double cov = swwv / n - mw * mwv;
  double var_r = (var_wv - 2.0 * e.mean * cov + e.mean * e.mean * var_w) / (mw * mw);
  e.stderr = std::sqrt(std::max(0.0, var_r) / n);
  return e;
}

// ---------------------------------------------------------------------------
// PSD-affine maximizer.
// ---------------------------------------------------------------------------

namespace {

int hdim(int n) { return n * n; }

// Real parametrization of Hermitian matrices preserving the HS inner product.
void hvec_into(const CMat& m, double* out) {
  const int n = m.rows();
  int k = 0;
  const double s2 = std::sqrt(2.0);
  for (int i = 0; i < n; ++i) out[k++] = m.at(i, i).real();
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      out[k++] = s2 * m.at(i, j).real();
      out[k++] = s2 * m.at(i, j).imag();
    }
}

CMat hunvec(const double* v, int n) {
  CMat m(n, n);
  int k = 0;
  const double is2 = 1.0 / std::sqrt(2.0);
  for (int i = 0; i < n; ++i) m.at(i, i) = v[k++];
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      double re = v[k++] * is2;
      double im = v[k++] * is2;
      m.at(i, j) = cplx(re, im);
      m.at(j, i) = cplx(re, -im);
    }
  return m;
}

CMat psd_project(const CMat& m) {
  EigResult e = herm_eig((m + m.adjoint()) * cplx(0.5, 0.0), 1e-3);
  const int n = m.rows();
  CMat r(n, n);
  for (size_t k = 0; k < e.values.size(); ++k) {
    if (e.values[k] <= 0) continue;
    for (int i = 0; i < n; ++i) {
      const cplx w = e.values[k] * e.vectors.at(i, static_cast<int>(k));
      for (int j = 0; j < n; ++j) r.at(i, j) += w * std::conj(e.vectors.at(j, static_cast<int>(k)));
    }
  }
  return r;
}

struct RealMat {
  int rows = 0, cols = 0;
  std::vector<double> a;
  double& at(int r, int c) { return a[static_cast<size_t>(r) * cols + c]; }
  double at(int r, int c) const { return a[static_cast<size_t>(r) * cols + c]; }
};

}  // namespace

PsdMaxResult psd_affine_maximize(const AffinePsdProgram& prog, int max_iters, double tolerance) {
  const int nb = static_cast<int>(prog.block_dims.size());
  std::vector<int> boff(nb + 1, 0);
  for (int b = 0; b < nb; ++b) boff[b + 1] = boff[b] + hdim(prog.block_dims[b]);
  const int nx = boff[nb];

  std::vector<int> coff(prog.constraints.size() + 1, 0);
  for (size_t c = 0; c < prog.constraints.size(); ++c)
    coff[c + 1] = coff[c] + hdim(prog.constraints[c].target_dim);
  const int nc = coff[prog.constraints.size()];

  // Materialize the constraint matrix column by column.
  RealMat a{nc, nx, std::vector<double>(static_cast<size_t>(nc) * nx, 0.0)};
  std::vector<double> bvec(nc, 0.0);
  for (size_t c = 0; c < prog.constraints.size(); ++c)
    hvec_into(prog.constraints[c].rhs, &bvec[coff[c]]);

  std::vector<double> col(nc);
  for (int b = 0; b < nb; ++b) {
    const int n = prog.block_dims[b];
    for (int k = 0; k < hdim(n); ++k) {
      std::vector<double> unit(hdim(n), 0.0);
      unit[k] = 1.0;
      CMat h = hunvec(unit.data(), n);
      std::fill(col.begin(), col.end(), 0.0);
      for (size_t c = 0; c < prog.constraints.size(); ++c) {
        CMat img(prog.constraints[c].target_dim, prog.constraints[c].target_dim);
        bool any = false;
        for (const auto& [blk, fn] : prog.constraints[c].terms)
          if (blk == b) {
            img += fn(h);
            any = true;
          }
        if (any) hvec_into(img, &col[coff[c]]);
      }
      for (int r = 0; r < nc; ++r) a.at(r, boff[b] + k) = col[r];
    }
  }

  // Projection onto the affine set: x - A^T (A A^T)^+ (A x - b).
  CMat aat(nc, nc);
  for (int i = 0; i < nc; ++i)
    for (int j = 0; j < nc; ++j) {
      double acc = 0;
      for (int k = 0; k < nx; ++k) acc += a.at(i, k) * a.at(j, k);
      aat.at(i, j) = acc;
    }
  CMat aat_pinv = pinv_on_support(aat, 1e-6);

  auto affine_project = [&](std::vector<double>& x) {
    std::vector<double> r(nc, 0.0);
    for (int i = 0; i < nc; ++i) {
      double acc = -bvec[i];
      for (int k = 0; k < nx; ++k) acc += a.at(i, k) * x[k];
      r[i] = acc;
    }
    std::vector<double> y(nc, 0.0);
    for (int i = 0; i < nc; ++i) {
      double acc = 0;
      for (int j = 0; j < nc; ++j) acc += aat_pinv.at(i, j).real() * r[j];
      y[i] = acc;
    }
    for (int k = 0; k < nx; ++k) {
      double acc = 0;
      for (int i = 0; i < nc; ++i) acc += a.at(i, k) * y[i];
      x[k] -= acc;
    }
  };
  auto psd_project_all = [&](std::vector<double>& x) {
    for (int b = 0; b < nb; ++b) {
      CMat m = hunvec(&x[boff[b]], prog.block_dims[b]);
      CMat p = psd_project(m);
      hvec_into(p, &x[boff[b]]);
    }
  };
  auto residual_of = [&](const std::vector<double>& x) {
    double worst = 0.0;
    for (int i = 0; i < nc; ++i) {
      double acc = -bvec[i];
      for (int k = 0; k < nx; ++k) acc += a.at(i, k) * x[k];
      worst = std::max(worst, std::abs(acc));
    }
    return worst;
  };
  auto min_eig_of = [&](const std::vector<double>& x) {
    double worst = 0.0;
    for (int b = 0; b < nb; ++b) {
      EigResult e = herm_eig(hunvec(&x[boff[b]], prog.block_dims[b]), 1e-3);
      if (!e.values.empty()) worst = std::min(worst, e.values.back());
    }
    return worst;
  };
  // Dykstra alternating projections onto PSD cone and affine set.
  auto project_intersection = [&](std::vector<double>& x, int iters) {
    std::vector<double> p(nx, 0.0);
    std::vector<double> y(nx);
    for (int it = 0; it < iters; ++it) {
      for (int k = 0; k < nx; ++k) y[k] = x[k] + p[k];
      std::vector<double> z = y;
      psd_project_all(z);
      for (int k = 0; k < nx; ++k) p[k] = y[k] - z[k];
      x = z;
      affine_project(x);
      double drift = 0.0;
      for (int k = 0; k < nx; ++k) drift = std::max(drift, std::abs(x[k] - z[k]));
      if (drift < 1e-12 && min_eig_of(x) > -1e-12) break;
    }
  };

  std::vector<double> objv(nx, 0.0);
  for (int b = 0; b < nb; ++b) hvec_into(prog.objective[b], &objv[boff[b]]);
  double obj_norm = 0.0;
  for (double v : objv) obj_norm += v * v;
  obj_norm = std::sqrt(std::max(obj_norm, 1e-300));

  std::vector<double> x(nx, 0.0);
  if (!prog.feasible_start.empty()) {
    for (int b = 0; b < nb; ++b) hvec_into(prog.feasible_start[b], &x[boff[b]]);
  }
  project_intersection(x, 60);

  auto value_of = [&](const std::vector<double>& xx) {
    double acc = 0;
    for (int k = 0; k < nx; ++k) acc += objv[k] * xx[k];
    return acc;
  };

  PsdMaxResult best;
  best.value = value_of(x);
  std::vector<double> bx = x;

  int stall = 0;
  int it = 0;
  for (; it < max_iters; ++it) {
    const double step = 0.35 / obj_norm / std::sqrt(1.0 + it / 40.0);
    for (int k = 0; k < nx; ++k) x[k] += step * objv[k];
    project_intersection(x, 25);
    double v = value_of(x);
    if (v > best.value + 1e-12) {
      best.value = v;
      bx = x;
      stall = 0;
    } else if (++stall > 220) {
      break;
    }
  }
  // Final feasibility polish on the best iterate.
  project_intersection(bx, 300);
  best.value = value_of(bx);
  best.iterations = it;
  best.constraint_residual = residual_of(bx);
  best.min_eigenvalue = min_eig_of(bx);
  best.converged = best.constraint_residual <= tolerance && best.min_eigenvalue >= -1e-8;
  for (int b = 0; b < nb; ++b) best.x.push_back(hunvec(&bx[boff[b]], prog.block_dims[b]));
  return best;
}

void VerificationReport::grade(double tol_exact, double tol_sigma) {
  pass_exact = std::abs(exact - target) <= tol_exact * std::max(1.0, std::abs(target));
  // Covariant protocols have zero-variance estimators; the exact-path
  // tolerance absorbs their floating-point roundoff.
  pass_mc = samples == 0 || std::abs(mc - target) <=
                                tol_sigma * mc_stderr + tol_exact * std::max(1.0, std::abs(target));
}

}  // namespace combkit
