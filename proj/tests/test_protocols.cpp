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

#include "combkit/protocols.hpp"
#include "testutil.hpp"

using namespace combkit;
using namespace combkit::testutil;

TEST_CASE("cloner: closed form, comb structure, exact twirl evaluation") {
  for (int d : {2, 3}) {
    ClonerNetwork net = optimal_unitary_cloner(d);
    const double expect = (d + std::sqrt(d * d - 1.0)) / (d * d * d);
    CHECK(net.closed_form == doctest::Approx(expect).epsilon(1e-14));
    if (d == 2) CHECK(net.closed_form == doctest::Approx((2 + std::sqrt(3.0)) / 8).epsilon(1e-14));
    if (d == 3) CHECK(net.closed_form == doctest::Approx((3 + std::sqrt(8.0)) / 27).epsilon(1e-14));

    CombCheck chk = check_comb(net.choi, net.teeth);
    CHECK(chk.ok);
    CHECK(std::abs(net.exact - net.closed_form) < 1e-9);
  }
}

TEST_CASE("cloner: covariance of the optimal comb") {
  const int d = 2;
  ClonerNetwork net = optimal_unitary_cloner(d);
  RepDescriptor rep{{RepFactor{{{0, d}, {4, d}, {1, d}}, {false, false, true}},
                     RepFactor{{{2, d}, {3, d}, {5, d}}, {false, true, true}}}};
  CounterRng rng(3);
  LabeledOp canon = permute_wires(net.choi, {0, 4, 1, 2, 3, 5});
  for (int s = 0; s < 10; ++s) {
    CMat w = rep_sample(rep, canon.wires(), rng);
    CHECK(commutator(canon.mat(), w).frobenius_norm() < 1e-9);
  }
}

TEST_CASE("cloner: output channel matches the direct two-step formula") {
  const int d = 2;
  ClonerNetwork net = optimal_unitary_cloner(d);
  CMat u = CMat::identity(d);
  LabeledOp cu = cloner_output_choi(net, u);
  Channel as_channel{cu, {0, 4}, {3, 5}};

  CounterRng rng(5);
  CMat rho = random_density(4, rng);
  LabeledOp network_out = apply_channel(as_channel, LabeledOp({{0, d}, {4, d}}, rho));

  CMat psym = sym_projector(d), panti = antisym_projector(d);
  const double dp = d * (d + 1) / 2.0, dm = d * (d - 1) / 2.0;
  CMat direct(d * d, d * d);
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) {
      const CMat& pa = a == 0 ? psym : panti;
      const CMat& pb = b == 0 ? psym : panti;
      const double coeff = d / std::sqrt((a == 0 ? dp : dm) * (b == 0 ? dp : dm));
      CMat inner = pa * rho * pb;
      CMat reduced(d, d);
      for (int r = 0; r < d; ++r)
        for (int c = 0; c < d; ++c) {
          cplx s = 0.0;
          for (int k = 0; k < d; ++k) s += inner.at(r * d + k, c * d + k);
          reduced.at(r, c) = s;
        }
      CMat mid = kron(u * reduced * u.adjoint(), CMat::identity(d));
      direct += (pa * mid * pb) * coeff;
    }
  CHECK(max_abs_diff(align_like(network_out, LabeledOp({{3, d}, {5, d}}, direct)).mat(), direct) <
        1e-10);
}

TEST_CASE("cloner MC agrees with the closed form") {
  ClonerNetwork net = optimal_unitary_cloner(2);
  McEstimate mc = cloner_mc(net, 2, 3000, 42);
  CHECK(std::abs(mc.mean - net.closed_form) < 5.0 * mc.stderr);
}

TEST_CASE("learner closed forms and MC") {
  LearnerResult l21 = optimal_learner(2, 1);
  CHECK(l21.exact == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(l21.closed_form == doctest::Approx(0.5).epsilon(1e-12));
  LearnerResult l22 = optimal_learner(2, 2);
  CHECK(l22.exact == doctest::Approx(5.0 / 16).epsilon(1e-12));
  LearnerResult l32 = optimal_learner(3, 2);
  CHECK(l32.exact == doctest::Approx(6.0 / 81).epsilon(1e-12));
  LearnerResult l31 = optimal_learner(3, 1);
  CHECK(l31.exact == doctest::Approx(2.0 / 9).epsilon(1e-12));

  CHECK(l21.store_state.mat().trace().real() == doctest::Approx(1.0));

  McEstimate mc = learner_mc(2, 2, 20000, 42);
  CHECK(std::abs(mc.mean - 5.0 / 16) < 5.0 * mc.stderr);
  McEstimate mc31 = learner_mc(3, 1, 20000, 43);
  CHECK(std::abs(mc31.mean - 2.0 / 9) < 5.0 * mc31.stderr);
}

TEST_CASE("estimation POVM density integrates to the identity") {
  for (int d : {2, 3}) {
    LabeledOp bell = max_ent_projector({0, d}, {1, d});
    RepDescriptor rep{{RepFactor{{{0, d}}, {false}}}};
    LabeledOp avg = twirl_exact(bell, rep) * cplx(static_cast<double>(d), 0);
    CHECK(max_abs_diff(avg.mat(), CMat::identity(d * d)) < 1e-10);
  }
}

TEST_CASE("inverter: both routes give 2/d^2 and the supermap is a comb") {
  for (int d : {2, 3}) {
    InverterResult inv = optimal_inverter(d);
    CHECK(inv.closed_form == doctest::Approx(2.0 / (d * d)).epsilon(1e-14));
    CHECK(std::abs(inv.exact_supermap - inv.closed_form) < 1e-9);
    CHECK(std::abs(inv.exact_learning - inv.closed_form) < 1e-12);
    CHECK(check_comb(inv.supermap, inv.teeth).ok);
  }
  // Covariance of the supermap: conjugation by U_3 W_2 U_1 W_0 is a symmetry.
  {
    const int d = 2;
    InverterResult inv = optimal_inverter(d);
    RepDescriptor rep{{RepFactor{{{3, d}, {1, d}}, {false, false}},
                       RepFactor{{{2, d}, {0, d}}, {false, false}}}};
    CounterRng rng(71);
    LabeledOp canon = permute_wires(inv.supermap, {3, 1, 2, 0});
    for (int s = 0; s < 10; ++s) {
      CMat w = rep_sample(rep, canon.wires(), rng);
      CHECK(commutator(canon.mat(), w).frobenius_norm() < 1e-9);
    }
  }

  InverterResult inv2 = optimal_inverter(2);
  McEstimate a = inverter_mc_supermap(inv2, 2, 5000, 7);
  CHECK(std::abs(a.mean - 0.5) < 5.0 * a.stderr + 1e-12);
  McEstimate b = inverter_mc_learning(2, 20000, 8);
  CHECK(std::abs(b.mean - 0.5) < 5.0 * b.stderr);
}

TEST_CASE("tradeoff: endpoints, constraint, curve residual") {
  for (int d : {2, 3}) {
    TradeoffResult t0 = tradeoff_instrument(d, 0.0);
    CHECK(t0.f_formula == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(t0.g_formula == doctest::Approx(1.0 / (d * d)).epsilon(1e-12));
    CHECK(t0.y == doctest::Approx(1.0).epsilon(1e-12));

    TradeoffResult t1 = tradeoff_instrument(d, 1.0);
    CHECK(t1.f_formula == doctest::Approx(2.0 / (d * d)).epsilon(1e-12));
    CHECK(t1.g_formula == doctest::Approx(2.0 / (d * d)).epsilon(1e-12));

    for (double x : {0.0, 0.3, 0.7, 1.0}) {
      TradeoffResult t = tradeoff_instrument(d, x);
      CHECK(d * d * t.x * t.x + d * d * t.y * t.y + 2 * t.x * t.y * d ==
            doctest::Approx(d * d).epsilon(1e-12));
      CHECK(t.r_seed.mat().trace().real() == doctest::Approx(d * d).epsilon(1e-10));
      CHECK(is_psd(t.r_seed, 1e-10));
      CHECK(t.f_exact == doctest::Approx(t.f_formula).epsilon(1e-10));
      CHECK(t.g_exact == doctest::Approx(t.g_formula).epsilon(1e-10));
      CHECK(t.curve_residual < 1e-9);
    }
  }
  auto rows = tradeoff_curve(2, 101);
  CHECK(rows.size() == 101);
  for (const auto& r : rows) CHECK(r.residual < 1e-9);
  CHECK(rows.front().info == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(rows.front().dist == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(rows.back().info == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(rows.back().dist == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("tradeoff: disturbance bound grows with d pointwise in the interior") {
  for (double x : {0.2, 0.5, 0.8}) {
    TradeoffResult t2 = tradeoff_instrument(2, x);
    auto dist_at = [](int d, double info) {
      double aa = 2.0 * d * d * info + 4.0 * (1.0 - info);
      return (aa - std::sqrt(aa * aa - 4.0 * d * d * d * d * info * info)) / (2.0 * d * d);
    };
    double d3 = dist_at(3, t2.info);
    double d4 = dist_at(4, t2.info);
    CHECK(t2.dist < d3);
    CHECK(d3 < d4);
  }
}

TEST_CASE("tradeoff MC: fidelity and gain at an interior point") {
  TradeoffResult t = tradeoff_instrument(2, 0.6);
  McEstimate f = tradeoff_mc_fidelity(t, 2, 3000, 11);
  CHECK(std::abs(f.mean - t.f_formula) < 5.0 * f.stderr + 1e-10);
  McEstimate g = tradeoff_mc_gain(t, 2, 40000, 12);
  CHECK(std::abs(g.mean - t.g_formula) < 5.0 * g.stderr + 1e-10);
}

TEST_CASE("measurement learning 1->1") {
  for (int d : {2, 3}) {
    MeasLearn11 ml = measurement_learning_1to1(d);
    CHECK(ml.closed_form == doctest::Approx((d + 1.0) / (d * d)).epsilon(1e-14));
    CHECK(std::abs(ml.exact - ml.closed_form) < 1e-10);

    LabeledOp sum = ml.instrument[0];
    for (size_t i = 1; i < ml.instrument.size(); ++i) sum = sum + ml.instrument[i];
    CombCheck chk = check_comb(sum, {Tooth{{}, {0}}, Tooth{{1}, {}}, Tooth{{2}, {}}});
    CHECK(chk.ok);
    for (const auto& r : ml.instrument) CHECK(is_psd(r, 1e-10));

    CounterRng rng(17);
    for (int s = 0; s < 20; ++s) {
      CMat u = haar_unitary(d, rng);
      auto g = replicated_povm_11(ml, u);
      CMat tot(d, d);
      for (const auto& gi : g) tot += gi;
      CHECK(max_abs_diff(tot, CMat::identity(d)) < 1e-12);
      for (int i = 0; i < d; ++i) {
        std::vector<cplx> col(d);
        for (int r = 0; r < d; ++r) col[r] = u.at(r, i);
        CMat expect = outer(col, col) * (1.0 / (d * (d - 1.0))) +
                      CMat::identity(d) * ((d * d - d - 1.0) / (d * d * (d - 1.0)));
        CHECK(max_abs_diff(g[static_cast<size_t>(i)], expect) < 1e-12);
      }
    }
  }
  MeasLearn11 ml2 = measurement_learning_1to1(2);
  CHECK(ml2.exact == doctest::Approx(0.75).epsilon(1e-12));
  McEstimate mc = meas_learn_11_mc(ml2, 2000, 5);
  CHECK(std::abs(mc.mean - 0.75) < 5.0 * mc.stderr + 1e-12);
}

TEST_CASE("measurement learning 2->1: maximization") {
  MeasLearn21 m2 = measurement_learning_2to1(2);
  CHECK(m2.unimodal);
  CHECK(m2.t_plus > 0.0);
  CHECK(m2.t_minus >= 0.0);
  CHECK(3.0 * m2.t_plus + m2.t_minus == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(m2.f_max == doctest::Approx(0.811420).epsilon(1e-4));
  CHECK(std::abs(m2.f_max - 0.81) < 0.01);
  // The display formula overshoots 1 at d=2: the recorded reading mismatch.
  CHECK(m2.f_display_formula > 1.0);

  MeasLearn21 m3 = measurement_learning_2to1(3);
  CHECK(m3.unimodal);
  CHECK(m3.f_max > 4.0 / 9.0);
  CHECK(m3.f_max < 1.0);
}

TEST_CASE("measurement learning 1->2: blocks, normalization, evaluation") {
  for (int d : {2, 3}) {
    MeasLearn12 ml = measurement_learning_1to2(d);
    for (int k = 0; k < d; ++k) {
      CMat sum(d * d * d, d * d * d);
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
          const auto& blk = ml.instrument[static_cast<size_t>(i) * d + j][static_cast<size_t>(k)];
          CHECK(is_psd(blk, 1e-10));
          sum += blk.mat();
        }
      CHECK(max_abs_diff(sum, CMat::identity(d * d * d) * (1.0 / d)) < 1e-10);
    }
    double expect = 4.0 * (2 * d - 1.0) / (3.0 * d * d * (d * d - 1.0)) + 1.0 / (d * d) +
                    (d > 2 ? 1.0 / (2.0 * d * d) : 0.0);
    CHECK(ml.delta_eval == doctest::Approx(expect).epsilon(1e-10));
    CHECK(!ml.discrepancy.empty());
  }
  MeasLearn12 m2 = measurement_learning_1to2(2);
  CHECK(m2.delta_eval == doctest::Approx(7.0 / 12).epsilon(1e-10));
  CHECK(m2.closed_form == doctest::Approx((7 + 2 * std::sqrt(3.0)) / 12).epsilon(1e-12));

  CounterRng rng(23);
  for (int s = 0; s < 5; ++s) {
    CMat u = haar_unitary(2, rng);
    auto g = replicated_povm_12(m2, u);
    CMat tot(4, 4);
    for (const auto& gij : g) tot += gij;
    CHECK(max_abs_diff(tot, CMat::identity(4)) < 1e-10);
  }
  McEstimate mc = meas_learn_12_mc(m2, 3000, 9);
  CHECK(std::abs(mc.mean - m2.delta_eval) < 5.0 * mc.stderr + 1e-12);
}

TEST_CASE("measurement cloning 1->2: value 4/(3d) and extremality shape") {
  for (int d : {2, 3}) {
    MeasClone12 mc = measurement_cloning_1to2(d);
    CHECK(mc.closed_form == doctest::Approx(4.0 / (3.0 * d)).epsilon(1e-14));
    CHECK(std::abs(mc.exact - mc.closed_form) < 1e-9);

    CHECK(psd_rank(mc.s_xx, 1e-9) == 1);
    CHECK(psd_rank(mc.s_xy, 1e-9) == 1);

    for (const auto& row : mc.instrument)
      for (const auto& blk : row) CHECK(is_psd(blk, 1e-9));

    for (int k = 0; k < d; ++k) {
      CMat sum(d * d * d, d * d * d);
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
          sum += mc.instrument[static_cast<size_t>(i) * d + j][static_cast<size_t>(k)].mat();
      CMat tr2(d * d, d * d);
      for (int r = 0; r < d * d; ++r)
        for (int c = 0; c < d * d; ++c) {
          cplx s = 0.0;
          for (int x = 0; x < d; ++x) s += sum.at(x * d * d + r, x * d * d + c);
          tr2.at(r, c) = s;
        }
      CHECK(max_abs_diff(tr2, CMat::identity(d * d)) < 1e-9);
    }
  }
  MeasClone12 m2 = measurement_cloning_1to2(2);
  CHECK(m2.exact == doctest::Approx(2.0 / 3).epsilon(1e-10));
  CounterRng rng(31);
  for (int s = 0; s < 5; ++s) {
    CMat u = haar_unitary(2, rng);
    auto g = replicated_povm_c12(m2, u);
    CMat tot(4, 4);
    for (const auto& gij : g) tot += gij;
    CHECK(max_abs_diff(tot, CMat::identity(4)) < 1e-9);
  }
  McEstimate mcmc = meas_clone_12_mc(m2, 3000, 13);
  CHECK(std::abs(mcmc.mean - 2.0 / 3) < 5.0 * mcmc.stderr + 1e-12);
}

TEST_CASE("oracle reproduces the 1->1 measurement learning optimum") {
  AffinePsdProgram prog = meas_learn_11_program(2);
  PsdMaxResult res = psd_affine_maximize(prog, 1500);
  CHECK(res.constraint_residual < 1e-7);
  CHECK(res.min_eigenvalue > -1e-8);
  CHECK(std::abs(res.value - 0.75) < 1e-3);
  CHECK(res.value < 0.75 + 1e-6);
}
