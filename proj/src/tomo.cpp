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

#include "combkit/tomo.hpp"

#include <algorithm>
#include <cmath>

#include "combkit/choi.hpp"

namespace combkit {

namespace {

cplx inner(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  cplx acc = 0.0;
  for (size_t i = 0; i < a.size(); ++i) acc += std::conj(a[i]) * b[i];
  return acc;
}

}  // namespace

CMat frame_operator(const Frame& frame) {
  if (frame.vectors.empty()) throw dim_mismatch("frame_operator: empty frame");
  const int n = static_cast<int>(frame.vectors.front().size());
  CMat f(n, n);
  for (const auto& v : frame.vectors) f += outer(v, v);
  return f;
}

OptimalDualResult optimal_dual(const Frame& frame, const std::vector<cplx>& r_s, const CMat& g) {
  const int n = static_cast<int>(frame.vectors.front().size());
  OptimalDualResult res;
  std::vector<const std::vector<cplx>*> kept;
  std::vector<double> probs;
  for (const auto& v : frame.vectors) {
    double p = inner(r_s, v).real();
    if (p <= 1e-14) {
      ++res.dropped;
      continue;
    }
    kept.push_back(&v);
    probs.push_back(p);
  }
  if (kept.empty()) throw numeric_error("optimal_dual: all frame elements have zero probability");

  res.x_op = CMat(n, n);
  for (size_t i = 0; i < kept.size(); ++i) res.x_op += outer(*kept[i], *kept[i]) * cplx(1.0 / probs[i], 0.0);
  CMat xinv = pinv_on_support(res.x_op);
  for (size_t i = 0; i < kept.size(); ++i) {
    auto d = xinv.apply(*kept[i]);
    for (auto& z : d) z /= probs[i];
    res.dual.vectors.push_back(std::move(d));
  }
  res.eta = (xinv * g).trace().real();
  return res;
}

double eta_of_dual(const Frame& frame, const DualFrame& dual, const std::vector<cplx>& r_s,
                   const CMat& g) {
  if (frame.vectors.size() != dual.vectors.size())
    throw dim_mismatch("eta_of_dual: frame/dual size mismatch");
  double eta = 0.0;
  for (size_t i = 0; i < frame.vectors.size(); ++i) {
    double p = inner(r_s, frame.vectors[i]).real();
    auto gd = g.apply(dual.vectors[i]);
    eta += inner(dual.vectors[i], gd).real() * p;
  }
  return eta;
}

DualFrame perturb_dual(const Frame& frame, const DualFrame& base, double amplitude,
                       CounterRng& rng) {
  const size_t n = frame.vectors.size();
  const size_t dim = frame.vectors.front().size();
  // K must satisfy sum_i |Pi_i>><<K_i| = 0: each coordinate slice of conj(K)
  // must lie in the kernel of the D x n matrix M[a,i] = Pi_i[a].
  CMat m(static_cast<int>(dim), static_cast<int>(n));
  for (size_t i = 0; i < n; ++i)
    for (size_t a = 0; a < dim; ++a) m.at(static_cast<int>(a), static_cast<int>(i)) = frame.vectors[i][a];
  CMat mm = m * m.adjoint();
  CMat proj = m.adjoint() * pinv_on_support(mm) * m;  // projector onto row space

  std::vector<std::vector<cplx>> k(n, std::vector<cplx>(dim));
  for (size_t b = 0; b < dim; ++b) {
    std::vector<cplx> w(n);
    for (size_t i = 0; i < n; ++i) w[i] = rng.cgauss() * amplitude;
    auto pw = proj.apply(w);
    for (size_t i = 0; i < n; ++i) k[i][b] = std::conj(w[i] - pw[i]);
  }
  DualFrame out = base;
  for (size_t i = 0; i < n; ++i)
    for (size_t b = 0; b < dim; ++b) out.vectors[i][b] += k[i][b];
  return out;
}

const char* to_string(TomoTarget t) {
  switch (t) {
    case TomoTarget::operations: return "operations";
    case TomoTarget::channels: return "channels";
    case TomoTarget::unital: return "unital";
    case TomoTarget::states: return "states";
    case TomoTarget::effects: return "effects";
  }
  return "?";
}

double eta_closed_form(TomoTarget target, int d) {
  const double dd = d;
  const double d2 = dd * dd, d3 = d2 * dd, d4 = d2 * d2, d6 = d4 * d2;
  const double s2 = std::sqrt(2.0);
  switch (target) {
    case TomoTarget::operations:
      return d6 + d4 - d2;
    case TomoTarget::channels:
      return d6 + (2.0 * s2 - 3.0) * d4 + (5.0 - 4.0 * s2) * d2 + 2.0 * (s2 - 1.0);
    case TomoTarget::unital:
      return (d2 - 1.0) * (d2 - 1.0) * (d2 - 1.0) + 1.0;
    case TomoTarget::states:
      return (d3 - d2 + 1.0) / dd;
    case TomoTarget::effects:
      return d3 - d2 + 1.0;
  }
  throw dim_mismatch("eta_closed_form: bad target");
}

namespace {

double beta_of(TomoTarget target, int d) {
  switch (target) {
    case TomoTarget::operations:
      return std::sqrt((d + 1.0) / (d * d + 1.0));
    case TomoTarget::channels:
      return std::sqrt((d + 1.0) / (2.0 + std::sqrt(2.0) * (d * d - 1.0)));
    case TomoTarget::unital:
      return 0.0;
    default:
      return 1.0;  // states/effects: pure seed
  }
}

}  // namespace

TesterSeed optimal_tester_seed(TomoTarget target, int d) {
  TesterSeed out;
  out.beta = beta_of(target, d);
  if (target == TomoTarget::states || target == TomoTarget::effects) {
    CMat proj(d, d);
    proj.at(0, 0) = 1.0;
    double scale = (target == TomoTarget::states) ? d : 1.0;
    out.seed = LabeledOp({{1, d}}, proj * scale);
    return out;
  }
  CMat psi(d, d);
  for (int i = 0; i < d; ++i) psi.at(i, i) = (1.0 - out.beta) / d;
  psi.at(0, 0) += out.beta;
  CMat sq = mat_sqrt_psd(psi);
  auto v = vectorize(sq);
  out.seed = LabeledOp({{0, d}, {1, d}}, outer(v, v) * cplx(static_cast<double>(d), 0.0));
  return out;
}

namespace {

CMat pair_projector(int d, bool q0, bool q1) {
  CMat p0 = pp_projector(d);
  if (q0) p0 = CMat::identity(d * d) - p0;
  CMat p1 = pp_projector(d);
  if (q1) p1 = CMat::identity(d * d) - p1;
  LabeledOp op = kron(LabeledOp({{0, d}, {2, d}}, p0), LabeledOp({{1, d}, {3, d}}, p1));
  return permute_wires(op, {0, 1, 2, 3}).mat();
}

// Projector onto the span of the vectorized target set (operations: all).
CMat tomo_subspace(TomoTarget target, int d) {
  CMat q = pair_projector(d, false, false) + pair_projector(d, true, false) +
           pair_projector(d, false, true) + pair_projector(d, true, true);
  if (target == TomoTarget::channels)
    q = pair_projector(d, false, false) + pair_projector(d, false, true) +
        pair_projector(d, true, true);
  if (target == TomoTarget::unital)
    q = pair_projector(d, false, false) + pair_projector(d, true, true);
  return q;
}

}  // namespace

CovariantEval covariant_eta_exact(TomoTarget target, int d) {
  CovariantEval out;
  if (target == TomoTarget::states || target == TomoTarget::effects) {
    // Single-wire analogue: X~ = twirl(|Pi_0>><<Pi_0| / <<R_S|Pi_0>>) under U (x) U*.
    TesterSeed seed = optimal_tester_seed(target, d);
    auto v = vectorize(seed.seed.mat());
    LabeledOp xs({{1, d}, {9, d}}, outer(v, v));
    RepDescriptor rep{{RepFactor{{{1, d}, {9, d}}, {false, true}}}};
    LabeledOp xt = twirl_exact(xs, rep);
    double denom = (target == TomoTarget::states) ? seed.seed.mat().trace().real() / d : 1.0;
    out.x_twirled = xt.mat() * cplx(1.0 / denom, 0.0);
    out.eta = pinv_on_support(out.x_twirled).trace().real();
    out.coeff_a = ((out.x_twirled * (CMat::identity(d * d) - pp_projector(d))).trace().real()) /
                  (d * d - 1.0);
    out.info_complete = psd_rank(out.x_twirled) == d * d;
    return out;
  }

  TesterSeed seed = optimal_tester_seed(target, d);
  // X seed: |Pi_0>><<Pi_0| / <<R_S|Pi_0>>; with Tr[Pi_0] = d and R_S = I/d the
  // denominator is 1. Wires (0,1) row copy and (2,3) column copy.
  auto v = vectorize(seed.seed.mat());
  LabeledOp xs({{0, d}, {1, d}, {2, d}, {3, d}}, outer(v, v));
  RepDescriptor wuv{{RepFactor{{{0, d}, {2, d}}, {false, true}},
                     RepFactor{{{1, d}, {3, d}}, {false, true}}}};
  LabeledOp xt = twirl_exact(xs, wuv);
  out.x_twirled = xt.mat();

  CMat pqp = pair_projector(d, true, false);
  CMat ppq = pair_projector(d, false, true);
  CMat pqq = pair_projector(d, true, true);
  out.coeff_a = (out.x_twirled * pqp).trace().real() / pqp.trace().real();
  out.coeff_b = (out.x_twirled * ppq).trace().real() / ppq.trace().real();
  out.coeff_c = (out.x_twirled * pqq).trace().real() / pqq.trace().real();

  CMat q = tomo_subspace(target, d);
  CMat xq = q * out.x_twirled * q;
  out.eta = (pinv_on_support(xq) * q).trace().real();
  int qrank = static_cast<int>(std::lround(q.trace().real()));
  out.info_complete = psd_rank(xq) == qrank;
  return out;
}

double eta_weighted(const CovariantEval& eval, int d, double g1, double g2, double g3, double g4) {
  const double dd = d;
  return g1 + (dd * dd - 1.0) * (g2 / eval.coeff_a + g3 / eval.coeff_b +
                                 (dd * dd - 1.0) * g4 / eval.coeff_c);
}

double eta_mc(TomoTarget target, int d, int n_samples, std::uint64_t seed) {
  if (target == TomoTarget::states || target == TomoTarget::effects)
    throw dim_mismatch("eta_mc: process targets only");
  TesterSeed ts = optimal_tester_seed(target, d);
  const int dim = d * d * d * d;
  CMat x(dim, dim);
  CounterRng rng = CounterRng::substream(seed, 0);
  for (int s = 0; s < n_samples; ++s) {
    CMat u = haar_unitary(d, rng);
    CMat w = haar_unitary(d, rng);
    CMat pi = kron(u, w) * ts.seed.mat() * kron(u, w).adjoint();
    auto v = vectorize(pi);
    x += outer(v, v);
  }
  x = x * cplx(1.0 / n_samples, 0.0);

  CMat q = tomo_subspace(target, d);
  CMat xq = q * x * q;
  return (pinv_on_support(xq) * q).trace().real();
}

}  // namespace combkit
