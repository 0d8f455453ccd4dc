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

#include "combkit/choi.hpp"
#include "combkit/group.hpp"
#include "testutil.hpp"

using namespace combkit;
using namespace combkit::testutil;

TEST_CASE("vectorize basics and round trip") {
  auto v = vectorize(CMat::identity(2));
  CHECK(v == std::vector<cplx>{cplx(1, 0), cplx(0, 0), cplx(0, 0), cplx(1, 0)});

  CMat e01(2, 2);
  e01.at(0, 1) = 1.0;
  auto w = vectorize(e01);
  CHECK(w == std::vector<cplx>{cplx(0, 0), cplx(1, 0), cplx(0, 0), cplx(0, 0)});

  CounterRng rng(1);
  CMat a = random_cmat(3, 3, rng);
  CHECK(max_abs_diff(devectorize(vectorize(a), 3, 3), a) == 0.0);
}

TEST_CASE("(A (x) B)|C>> = |A C B^T>>") {
  CounterRng rng(2);
  for (int t = 0; t < 6; ++t) {
    CMat a = random_cmat(3, 3, rng), b = random_cmat(3, 3, rng), c = random_cmat(3, 3, rng);
    auto lhs = kron(a, b).apply(vectorize(c));
    auto rhs = vectorize(a * c * b.transpose());
    for (size_t i = 0; i < lhs.size(); ++i) CHECK(std::abs(lhs[i] - rhs[i]) < 1e-12);
  }
}

TEST_CASE("choi of identity, depolarizing and unitary channels") {
  Channel id = identity_channel({0, 2}, {1, 2});
  CHECK(max_abs_diff(id.choi.mat(), max_ent_projector({1, 2}, {0, 2}).mat()) < 1e-14);
  CHECK(std::abs(id.choi.mat().trace() - cplx(2, 0)) < 1e-13);
  CHECK(psd_rank(id.choi.mat()) == 1);

  Channel dep = depolarizing_channel(2, {0, 2}, {1, 2});
  CHECK(max_abs_diff(dep.choi.mat(), CMat::identity(4) * 0.5) < 1e-13);

  CounterRng rng(3);
  CMat u = haar_unitary(2, rng);
  Channel cu = unitary_channel(u, {0, 2}, {1, 2});
  CHECK(max_abs_diff(cu.choi.mat(), unitary_choi_op(u, {1, 2}, {0, 2}).mat()) < 1e-13);
}

TEST_CASE("apply_channel") {
  CounterRng rng(5);
  Channel id = identity_channel({0, 2}, {1, 2});
  CMat rho = random_density(2, rng);
  LabeledOp out = apply_channel(id, LabeledOp({{0, 2}}, rho));
  CHECK(max_abs_diff(out.mat(), rho) < 1e-13);
  CHECK(out.labels() == std::vector<int>{1});

  Channel dep = depolarizing_channel(2, {0, 2}, {1, 2});
  CMat ket0(2, 2);
  ket0.at(0, 0) = 1.0;
  LabeledOp mixed = apply_channel(dep, LabeledOp({{0, 2}}, ket0));
  CHECK(max_abs_diff(mixed.mat(), CMat::identity(2) * 0.5) < 1e-13);

  for (int t = 0; t < 5; ++t) {
    Channel c = random_cptp({0, 2}, {1, 2}, rng);
    LabeledOp r = apply_channel(c, LabeledOp({{0, 2}}, random_density(2, rng)));
    CHECK(std::abs(r.mat().trace() - cplx(1, 0)) < 1e-12);
  }
}

TEST_CASE("apply_channel equals link with the Choi operator") {
  CounterRng rng(7);
  Channel c = random_cptp({0, 3}, {1, 3}, rng);
  LabeledOp rho({{0, 3}}, random_density(3, rng));
  LabeledOp via_link = link(c.choi, rho);
  LabeledOp direct = apply_channel(c, rho);
  CHECK(max_abs_diff(align_like(via_link, direct).mat(), direct.mat()) < 1e-12);
}

TEST_CASE("kraus_from_choi round trips and properties") {
  CounterRng rng(11);
  CMat u = haar_unitary(3, rng);
  Channel cu = unitary_channel(u, {0, 3}, {1, 3});
  KrausSet ku = kraus_from_choi(cu);
  REQUIRE(ku.operators.size() == 1);
  // Single Kraus equals U up to the fixed global phase.
  CMat k = ku.operators[0];
  cplx phase = 0.0;
  for (int i = 0; i < 3 && phase == cplx(0.0, 0.0); ++i)
    for (int j = 0; j < 3; ++j)
      if (std::abs(u.at(i, j)) > 0.3) {
        phase = k.at(i, j) / u.at(i, j);
        break;
      }
  CHECK(std::abs(std::abs(phase) - 1.0) < 1e-10);
  CHECK(max_abs_diff(k, u * phase) < 1e-10);

  Channel dep = depolarizing_channel(2, {0, 2}, {1, 2});
  KrausSet kd = kraus_from_choi(dep);
  CHECK(kd.operators.size() == 4);
  CMat sum(2, 2);
  for (const CMat& kk : kd.operators) sum += kk.adjoint() * kk;
  CHECK(max_abs_diff(sum, CMat::identity(2)) < 1e-10);

  for (int t = 0; t < 8; ++t) {
    Channel c = random_cptp({0, 2}, {1, 2}, rng);
    KrausSet ks = kraus_from_choi(c);
    Channel back = choi_of_map(ks, {0, 2}, {1, 2});
    CHECK(max_abs_diff(back.choi.mat(), c.choi.mat()) < 1e-10);
  }
}

TEST_CASE("tp / hp / cp checks") {
  Channel id = identity_channel({0, 2}, {1, 2});
  CHECK(check_tp(id));
  CHECK(check_hp(id));
  CHECK(check_cp(id));

  CMat diag1(4, 4);
  diag1.at(0, 0) = 1.0;
  Channel notp{LabeledOp({{1, 2}, {0, 2}}, diag1), {0}, {1}};
  CHECK(check_cp(notp));
  CHECK(!check_tp(notp));

  // Transpose map: Choi is SWAP, HP but not CP.
  CMat swap(4, 4);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) swap.at(i * 2 + j, j * 2 + i) = 1.0;
  Channel transpose_map{LabeledOp({{1, 2}, {0, 2}}, swap), {0}, {1}};
  CHECK(check_hp(transpose_map));
  CHECK(!check_cp(transpose_map));
  auto eig = herm_eig(swap);
  CHECK(eig.values.back() == doctest::Approx(-1.0));
}

TEST_CASE("link: disjoint labels reduce to kron, identical labels to Tr[M^T N]") {
  CounterRng rng(13);
  LabeledOp a({{0, 2}}, random_cmat(2, 2, rng));
  LabeledOp b({{1, 3}}, random_cmat(3, 3, rng));
  CHECK(max_abs_diff(link(a, b).mat(), kron(a, b).mat()) == 0.0);

  LabeledOp rho({{0, 2}}, random_density(2, rng));
  LabeledOp eye = LabeledOp::identity({{0, 2}});
  LabeledOp s = link(rho, eye);
  CHECK(s.dim() == 1);
  CHECK(std::abs(s.mat().at(0, 0) - cplx(1, 0)) < 1e-12);
}

TEST_CASE("link composes unitary Chois") {
  CounterRng rng(17);
  for (int t = 0; t < 4; ++t) {
    CMat u = haar_unitary(2, rng), v = haar_unitary(2, rng);
    LabeledOp cu = unitary_choi_op(u, {1, 2}, {0, 2});
    LabeledOp cv = unitary_choi_op(v, {2, 2}, {1, 2});
    LabeledOp chain = link(cu, cv);
    LabeledOp expect = unitary_choi_op(v * u, {2, 2}, {0, 2});
    CHECK(max_abs_diff(align_like(chain, expect).mat(), expect.mat()) < 1e-12);
  }
}

TEST_CASE("link properties: commutativity, associativity, positivity, hermiticity") {
  CounterRng rng(19);
  int checked = 0;
  for (int t = 0; t < 50; ++t) {
    // Wires 0,1,2 with dim 2; a on {0,1}, b on {1,2}: shared label 1.
    CMat am = random_psd(4, rng), bm = random_psd(4, rng);
    LabeledOp a({{0, 2}, {1, 2}}, am);
    LabeledOp b({{1, 2}, {2, 2}}, bm);

    LabeledOp ab = link(a, b);
    LabeledOp ba = link(b, a);
    CHECK(max_abs_diff(align_like(ba, ab).mat(), ab.mat()) < 1e-12 * std::max(1.0, ab.mat().max_abs()));
    CHECK(is_psd(ab, 1e-9));
    CHECK(ab.mat().herm_defect() < 1e-11 * std::max(1.0, ab.mat().max_abs()));

    // Associativity: no label occurs in all three operands.
    CMat cm = random_psd(4, rng);
    LabeledOp c({{2, 2}, {3, 2}}, cm);
    LabeledOp l1 = link(link(a, b), c);
    LabeledOp l2 = link(a, link(b, c));
    CHECK(max_abs_diff(align_like(l2, l1).mat(), l1.mat()) < 1e-11 * std::max(1.0, l1.mat().max_abs()));
    ++checked;
  }
  CHECK(checked == 50);
}

TEST_CASE("link with hermitian non-psd inputs stays hermitian") {
  CounterRng rng(23);
  LabeledOp a({{0, 2}, {1, 2}}, random_hermitian(4, rng));
  LabeledOp b({{1, 2}, {2, 3}}, random_hermitian(6, rng));
  LabeledOp ab = link(a, b);
  CHECK(ab.mat().herm_defect() < 1e-12 * std::max(1.0, ab.mat().max_abs()));
}
