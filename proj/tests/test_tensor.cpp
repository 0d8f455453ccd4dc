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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "combkit/tensor.hpp"
#include "testutil.hpp"

using namespace combkit;
using namespace combkit::testutil;

namespace {

LabeledOp basis_projector(int label, int dim, int k) {
  CMat m(dim, dim);
  m.at(k, k) = 1.0;
  return LabeledOp({{label, dim}}, m);
}

LabeledOp max_ent_outer(int la, int lb, int d) {
  // |I>><<I| on two d-dimensional wires.
  CMat m(d * d, d * d);
  for (int n = 0; n < d; ++n)
    for (int p = 0; p < d; ++p) m.at(n * d + n, p * d + p) = 1.0;
  return LabeledOp({{la, d}, {lb, d}}, m);
}

}  // namespace

TEST_CASE("constructors reject invalid input") {
  CHECK_THROWS(CMat(2, 2, {cplx(1, 0), cplx(0, 0), cplx(0, 0)}));
  CHECK_THROWS(CMat(1, 1, {cplx(std::nan(""), 0)}));
  CHECK_THROWS(LabeledOp({{0, 2}, {0, 3}}, CMat::identity(6)));
  CHECK_THROWS(LabeledOp({{0, 2}, {1, 3}}, CMat::identity(5)));
}

TEST_CASE("kron identity case and basis projector") {
  LabeledOp a = LabeledOp::identity({{0, 2}});
  LabeledOp b = LabeledOp::identity({{1, 3}});
  LabeledOp ab = kron(a, b);
  CHECK(ab.dim() == 6);
  CHECK(max_abs_diff(ab.mat(), CMat::identity(6)) == 0.0);
  CHECK(ab.labels() == std::vector<int>{0, 1});

  LabeledOp p0 = basis_projector(0, 2, 0);
  LabeledOp p1 = basis_projector(1, 2, 1);
  LabeledOp p = kron(p0, p1);
  CHECK(std::abs(p.mat().trace() - cplx(1.0, 0.0)) < 1e-15);
  CHECK(std::abs(p.mat().at(1, 1) - cplx(1.0, 0.0)) < 1e-15);  // |01> index = 1

  CHECK_THROWS(kron(a, LabeledOp::identity({{0, 2}})));
}

TEST_CASE("(sx otimes sx) leaves |I>> invariant at d=2") {
  CMat sx(2, 2, {0, 1, 1, 0});
  LabeledOp xx = kron(LabeledOp({{0, 2}}, sx), LabeledOp({{1, 2}}, sx));
  // |I>> = (1,0,0,1)
  std::vector<cplx> bell = {1, 0, 0, 1};
  auto out = xx.mat().apply(bell);
  for (int i = 0; i < 4; ++i) CHECK(std::abs(out[i] - bell[i]) < 1e-15);
}

TEST_CASE("partial trace of |I>><<I| gives identity") {
  for (int d : {2, 3}) {
    LabeledOp bell = max_ent_outer(0, 1, d);
    LabeledOp red = partial_trace(bell, {1});
    CHECK(red.labels() == std::vector<int>{0});
    CHECK(max_abs_diff(red.mat(), CMat::identity(d)) < 1e-14);
  }
}

TEST_CASE("full trace and product-state factorization") {
  CounterRng rng(7);
  CMat rho = random_density(2, rng);
  CMat sig = random_density(3, rng);
  LabeledOp prod = kron(LabeledOp({{0, 2}}, rho), LabeledOp({{1, 3}}, sig));
  LabeledOp all = partial_trace(prod, {0, 1});
  CHECK(all.dim() == 1);
  CHECK(std::abs(all.mat().at(0, 0) - cplx(1.0, 0.0)) < 1e-12);

  LabeledOp t0 = partial_trace(prod, {0});
  CHECK(max_abs_diff(t0.mat(), sig) < 1e-13);
  CHECK_THROWS(partial_trace(prod, {5}));
}

TEST_CASE("partial_trace(kron(a,b), labels(b)) = Tr[b] a") {
  CounterRng rng(11);
  for (int trial = 0; trial < 12; ++trial) {
    // total dimension up to 64
    int da = 2 + static_cast<int>(rng.next_u64() % 7);
    int db = 2 + static_cast<int>(rng.next_u64() % 7);
    CMat a = random_cmat(da, da, rng);
    CMat b = random_cmat(db, db, rng);
    LabeledOp la({{0, da}}, a);
    LabeledOp lb({{1, db}}, b);
    LabeledOp red = partial_trace(kron(la, lb), {1});
    CHECK(max_abs_diff(red.mat(), a * b.trace()) < 1e-12);
  }
}

TEST_CASE("partial transpose basics") {
  CounterRng rng(13);
  CMat a = random_cmat(6, 6, rng);
  LabeledOp op({{0, 2}, {1, 3}}, a);
  LabeledOp full = partial_transpose(op, {0, 1});
  CHECK(max_abs_diff(full.mat(), a.transpose()) == 0.0);
  LabeledOp twice = partial_transpose(partial_transpose(op, {1}), {1});
  CHECK(max_abs_diff(twice.mat(), a) == 0.0);
  CHECK_THROWS(partial_transpose(op, {9}));
}

TEST_CASE("partial transpose of |I>><<I| on one wire is SWAP") {
  const int d = 2;
  LabeledOp bell = max_ent_outer(0, 1, d);
  LabeledOp pt = partial_transpose(bell, {1});
  CMat swap(d * d, d * d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) swap.at(i * d + j, j * d + i) = 1.0;
  CHECK(max_abs_diff(pt.mat(), swap) == 0.0);
}

TEST_CASE("permute_wires identity, swap and round trip") {
  CounterRng rng(17);
  CMat a = random_cmat(2, 2, rng), b = random_cmat(3, 3, rng), c = random_cmat(2, 2, rng);
  LabeledOp abc = kron(kron(LabeledOp({{0, 2}}, a), LabeledOp({{1, 3}}, b)), LabeledOp({{2, 2}}, c));

  LabeledOp same = permute_wires(abc, {0, 1, 2});
  CHECK(max_abs_diff(same.mat(), abc.mat()) == 0.0);

  LabeledOp sw = permute_wires(abc, {1, 0, 2});
  LabeledOp expect = kron(kron(LabeledOp({{1, 3}}, b), LabeledOp({{0, 2}}, a)), LabeledOp({{2, 2}}, c));
  CHECK(max_abs_diff(sw.mat(), expect.mat()) == 0.0);

  LabeledOp back = permute_wires(sw, {0, 1, 2});
  CHECK(max_abs_diff(back.mat(), abc.mat()) == 0.0);

  CHECK_THROWS(permute_wires(abc, {0, 1, 1}));
}

TEST_CASE("permute_wires preserves spectrum") {
  CounterRng rng(19);
  CMat h = random_hermitian(12, rng);
  LabeledOp op({{0, 2}, {1, 3}, {2, 2}}, h);
  auto e1 = herm_eig(op).values;
  auto e2 = herm_eig(permute_wires(op, {2, 0, 1})).values;
  for (size_t i = 0; i < e1.size(); ++i) CHECK(std::abs(e1[i] - e2[i]) < 1e-12);
}

TEST_CASE("herm_eig on simple spectra") {
  EigResult e = herm_eig(CMat::diag({3, 1}));
  CHECK(e.values[0] == doctest::Approx(3.0));
  CHECK(e.values[1] == doctest::Approx(1.0));

  CMat sx(2, 2, {0, 1, 1, 0});
  EigResult ex = herm_eig(sx);
  CHECK(ex.values[0] == doctest::Approx(1.0));
  CHECK(ex.values[1] == doctest::Approx(-1.0));

  CMat nh(2, 2, {cplx(0, 0), cplx(1, 0), cplx(0, 0), cplx(0, 0)});
  CHECK_THROWS(herm_eig(nh));
}

TEST_CASE("herm_eig reconstruction and orthonormality on random Hermitian") {
  CounterRng rng(23);
  for (int n : {2, 5, 16, 40, 64}) {
    CMat h = random_hermitian(n, rng);
    EigResult e = herm_eig(h);
    // V diag(lambda) V^dag == h
    CMat vd = e.vectors;
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) vd.at(i, j) *= e.values[j];
    CMat rec = vd * e.vectors.adjoint();
    CHECK(max_abs_diff(rec, h) < 1e-10 * std::max(1.0, h.max_abs()));
    CMat gram = e.vectors.adjoint() * e.vectors;
    CHECK(max_abs_diff(gram, CMat::identity(n)) < 1e-10);
    for (size_t k = 1; k < e.values.size(); ++k) CHECK(e.values[k - 1] >= e.values[k]);
  }
}

TEST_CASE("herm_eig handles degenerate spectra via projectors") {
  CounterRng rng(29);
  // Build H = 2 P + 0 (I-P) with random rank-3 projector in dim 8.
  CMat g = random_cmat(8, 3, rng);
  // Orthonormalize columns.
  for (int j = 0; j < 3; ++j) {
    for (int k = 0; k < j; ++k) {
      cplx ip = 0;
      for (int i = 0; i < 8; ++i) ip += std::conj(g.at(i, k)) * g.at(i, j);
      for (int i = 0; i < 8; ++i) g.at(i, j) -= ip * g.at(i, k);
    }
    double nrm = 0;
    for (int i = 0; i < 8; ++i) nrm += std::norm(g.at(i, j));
    nrm = std::sqrt(nrm);
    for (int i = 0; i < 8; ++i) g.at(i, j) /= nrm;
  }
  CMat p = g * g.adjoint();
  CMat h = p * 2.0;
  EigResult e = herm_eig(h);
  // Projector onto eigenvalue-2 cluster must match p even though individual
  // degenerate vectors are arbitrary.
  CMat q(8, 8);
  for (int k = 0; k < 8; ++k) {
    if (std::abs(e.values[k] - 2.0) > 1e-8) continue;
    for (int i = 0; i < 8; ++i)
      for (int j = 0; j < 8; ++j) q.at(i, j) += e.vectors.at(i, k) * std::conj(e.vectors.at(j, k));
  }
  CHECK(max_abs_diff(q, p) < 1e-10);
}

TEST_CASE("mat_sqrt_psd basics and rank-one case") {
  CHECK(max_abs_diff(mat_sqrt_psd(CMat::identity(3)), CMat::identity(3)) < 1e-12);
  CHECK(max_abs_diff(mat_sqrt_psd(CMat::diag({4, 9})), CMat::diag({2, 3})) < 1e-12);

  // sqrt(|I>><<I|) = |I>><<I| / sqrt(d)
  for (int d : {2, 3}) {
    LabeledOp bell = max_ent_outer(0, 1, d);
    CMat s = mat_sqrt_psd(bell.mat());
    CHECK(max_abs_diff(s, bell.mat() * (1.0 / std::sqrt(static_cast<double>(d)))) < 1e-12);
  }
  CHECK_THROWS(mat_sqrt_psd(CMat::diag({1, -1})));
}

TEST_CASE("mat_sqrt psd squares back and pinv obeys Penrose identities") {
  CounterRng rng(31);
  for (int n : {4, 9, 25, 64}) {
    CMat a = random_rank_deficient_psd(n, std::max(1, n / 2), rng);
    CMat s = mat_sqrt_psd(a);
    CHECK(max_abs_diff(s * s, a) < 1e-10 * std::max(1.0, a.max_abs()));

    CMat ai = pinv_on_support(a);
    CMat aai = a * ai;
    CHECK(max_abs_diff(a * ai * a, a) < 1e-10 * std::max(1.0, a.max_abs()));
    CHECK(max_abs_diff(ai * a * ai, ai) < 1e-10 * std::max(1.0, ai.max_abs()));
    CHECK(aai.herm_defect() < 1e-10 * std::max(1.0, aai.max_abs()));
    CMat iaa = ai * a;
    CHECK(iaa.herm_defect() < 1e-10 * std::max(1.0, iaa.max_abs()));
    // a * pinv = pinv * a = support projector
    CHECK(max_abs_diff(aai, iaa) < 1e-9 * std::max(1.0, aai.max_abs()));
  }
  CHECK(max_abs_diff(pinv_on_support(CMat::diag({2, 5})), CMat::diag({0.5, 0.2})) < 1e-13);
  CHECK(max_abs_diff(pinv_on_support(CMat::diag({1, 0})), CMat::diag({1, 0})) < 1e-13);
}

TEST_CASE("is_psd") {
  CHECK(is_psd(CMat::identity(4), 0.0));
  CHECK(!is_psd(CMat::diag({1, -1e-3}), 1e-6));
  CounterRng rng(37);
  CMat h = random_hermitian(6, rng);
  EigResult e = herm_eig(h);
  CMat shifted = h + CMat::identity(6) * std::abs(e.values.back());
  CHECK(is_psd(shifted, 1e-9));
}
