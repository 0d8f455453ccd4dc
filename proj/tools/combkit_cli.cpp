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

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <string>

#include <CLI11.hpp>

#include "combkit/io.hpp"
#include "combkit/suite.hpp"
#include "combkit/tomo.hpp"

using namespace combkit;

namespace {

std::uint64_t default_seed() {
  if (const char* env = std::getenv("COMBKIT_SEED")) return std::strtoull(env, nullptr, 10);
  return 42;
}

int cmd_verify_all(const SuiteConfig& cfg, const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);
  auto reports = run_golden_suite(cfg);
  bool all_pass = true;
  for (const auto& r : reports) {
    std::string name = r.protocol + "-d" + std::to_string(r.dim) + ".json";
    save_json(out_dir + "/" + name, to_json(r));
    std::printf("[%s] %-32s d=%d target=%.9f exact=%.9f mc=%.6f±%.6f\n",
                r.pass() ? "PASS" : "FAIL", r.protocol.c_str(), r.dim, r.target, r.exact, r.mc,
                r.mc_stderr);
    if (!r.note.empty()) std::printf("       note: %s\n", r.note.c_str());
    all_pass = all_pass && r.pass();
  }
  std::printf("%s\n", all_pass ? "all protocols pass" : "FAILURES present");
  return all_pass ? 0 : 1;
}

int cmd_protocol(const std::string& name, int d, double x, int copies, const std::string& mode,
                 std::uint64_t seed, int samples, const std::string& json_out) {
  VerificationReport r;
  r.protocol = name;
  r.dim = d;
  r.seed = seed;
  const bool want_exact = mode == "exact" || mode == "both";
  const bool want_mc = mode == "mc" || mode == "both";

  if (name == "cloner") {
    ClonerNetwork net = optimal_unitary_cloner(d);
    r.target = net.closed_form;
    if (want_exact) r.exact = net.exact;
    if (want_mc) {
      auto mc = cloner_mc(net, d, samples, seed);
      r.mc = mc.mean;
      r.mc_stderr = mc.stderr;
      r.samples = mc.samples;
    }
  } else if (name == "inverter") {
    InverterResult inv = optimal_inverter(d);
    r.target = inv.closed_form;
    if (want_exact) r.exact = inv.exact_supermap;
    if (want_mc) {
      auto mc = inverter_mc_supermap(inv, d, samples, seed);
      r.mc = mc.mean;
      r.mc_stderr = mc.stderr;
      r.samples = mc.samples;
    }
    r.note = "learning-route exact = " + std::to_string(inv.exact_learning);
  } else if (name == "learner") {
    LearnerResult lr = optimal_learner(d, copies);
    r.target = lr.closed_form;
    if (want_exact) r.exact = lr.exact;
    if (want_mc) {
      auto mc = learner_mc(d, copies, samples, seed);
      r.mc = mc.mean;
      r.mc_stderr = mc.stderr;
      r.samples = mc.samples;
    }
  } else if (name == "tradeoff") {
    TradeoffResult t = tradeoff_instrument(d, x);
    r.target = t.f_formula;
    if (want_exact) r.exact = t.f_exact;
    if (want_mc) {
      auto mc = tradeoff_mc_fidelity(t, d, samples, seed);
      r.mc = mc.mean;
      r.mc_stderr = mc.stderr;
      r.samples = mc.samples;
    }
    r.note = "x=" + std::to_string(t.x) + " y=" + std::to_string(t.y) +
             " G=" + std::to_string(t.g_formula) + " curve residual=" +
             std::to_string(t.curve_residual);
  } else if (name == "measure-learn-1to1") {
    MeasLearn11 ml = measurement_learning_1to1(d);
    r.target = ml.closed_form;
    if (want_exact) r.exact = ml.exact;
    if (want_mc) {
      auto mc = meas_learn_11_mc(ml, samples, seed);
      r.mc = mc.mean;
      r.mc_stderr = mc.stderr;
      r.samples = mc.samples;
    }
  } else if (name == "measure-learn-2to1") {
    MeasLearn21 ml = measurement_learning_2to1(d);
    r.target = ml.f_max;
    r.exact = ml.f_max;
    r.note = "t+=" + std::to_string(ml.t_plus) +
             "; display formula max=" + std::to_string(ml.f_display_formula);
  } else if (name == "measure-learn-1to2") {
    MeasLearn12 ml = measurement_learning_1to2(d);
    r.target = ml.closed_form;
    r.exact = ml.closed_form;
    if (want_mc) {
      auto mc = meas_learn_12_mc(ml, samples, seed);
      r.mc = mc.mean;
      r.mc_stderr = mc.stderr;
      r.samples = mc.samples;
    }
    r.note = "block reconstruction = " + std::to_string(ml.delta_eval) + "; " + ml.discrepancy;
  } else if (name == "measure-clone-1to2") {
    MeasClone12 mc12 = measurement_cloning_1to2(d);
    r.target = mc12.closed_form;
    if (want_exact) r.exact = mc12.exact;
    if (want_mc) {
      auto mc = meas_clone_12_mc(mc12, samples, seed);
      r.mc = mc.mean;
      r.mc_stderr = mc.stderr;
      r.samples = mc.samples;
    }
  } else {
    std::fprintf(stderr, "unknown protocol '%s'\n", name.c_str());
    return 2;
  }
  r.grade();
  std::printf("%s d=%d\n  target (closed form): %.12f\n", name.c_str(), d, r.target);
  if (want_exact) std::printf("  exact evaluation:     %.12f  [%s]\n", r.exact, r.pass_exact ? "ok" : "off");
  if (want_mc)
    std::printf("  mc estimate:          %.9f +- %.9f (n=%d)  [%s]\n", r.mc, r.mc_stderr,
                r.samples, r.pass_mc ? "ok" : "off");
  if (!r.note.empty()) std::printf("  note: %s\n", r.note.c_str());
  if (!json_out.empty()) save_json(json_out, to_json(r));
  return (want_exact && !r.pass_exact) || (want_mc && !r.pass_mc) ? 1 : 0;
}

int cmd_tomo_eta(const std::string& target, int d, int samples, std::uint64_t seed) {
  TomoTarget t;
  if (target == "operations")
    t = TomoTarget::operations;
  else if (target == "channels" || target == "channel")
    t = TomoTarget::channels;
  else if (target == "unital")
    t = TomoTarget::unital;
  else if (target == "states" || target == "state")
    t = TomoTarget::states;
  else if (target == "effects" || target == "effect")
    t = TomoTarget::effects;
  else {
    std::fprintf(stderr, "unknown target '%s'\n", target.c_str());
    return 2;
  }
  std::printf("eta (%s, d=%d)\n  closed form: %.12f\n", target.c_str(), d,
              eta_closed_form(t, d));
  CovariantEval ce = covariant_eta_exact(t, d);
  std::printf("  exact twirl: %.12f  (informationally complete: %s)\n", ce.eta,
              ce.info_complete ? "yes" : "no");
  if (t == TomoTarget::operations || t == TomoTarget::channels || t == TomoTarget::unital) {
    double mc = eta_mc(t, d, samples, seed);
    std::printf("  mc estimate: %.6f  (n=%d)\n", mc, samples);
  }
  return 0;
}

int cmd_group_projectors(const std::string& rep_name, int d, const std::string& out_dir) {
  RepDescriptor rep;
  if (rep_name == "uu")
    rep = RepDescriptor{{RepFactor{{{0, d}, {1, d}}, {false, false}}}};
  else if (rep_name == "uustar")
    rep = RepDescriptor{{RepFactor{{{0, d}, {1, d}}, {false, true}}}};
  else if (rep_name == "uuustar")
    rep = RepDescriptor{{RepFactor{{{0, d}, {1, d}, {2, d}}, {false, false, true}}}};
  else {
    std::fprintf(stderr, "unknown representation '%s' (use uu, uustar, uuustar)\n",
                 rep_name.c_str());
    return 2;
  }
  std::filesystem::create_directories(out_dir);
  for (const auto& block : projectors(rep)) {
    nlohmann::json j = to_json(block.projector);
    j["block"] = block.name;
    j["rep_dim"] = block.rep_dim;
    j["mult"] = block.mult;
    std::string path = out_dir + "/" + rep_name + "-d" + std::to_string(d) + "-" + block.name +
                       ".json";
    save_json(path, j);
    std::printf("wrote %s (rep_dim=%d, mult=%d)\n", path.c_str(), block.rep_dim, block.mult);
  }
  return 0;
}

int cmd_comb_check(const std::string& path) {
  Comb comb = comb_from_json(load_json(path));
  CombCheck chk = check_comb(comb.choi, comb.teeth);
  std::printf("psd: %s\n", chk.psd_ok ? "ok" : "FAIL");
  int tooth = static_cast<int>(comb.teeth.size());
  for (double resid : chk.residuals) std::printf("tooth %d residual: %.3e\n", tooth--, resid);
  std::printf("%s\n", chk.ok ? "comb normalization holds" : ("FAIL: " + chk.message).c_str());
  return chk.ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"combkit: Choi-operator calculus, quantum combs and optimal networks"};
  app.require_subcommand(1);

  // verify-all
  auto* verify = app.add_subcommand("verify-all", "run the golden-number suite");
  SuiteConfig cfg;
  cfg.seed = default_seed();
  std::string out_dir = "reports";
  verify->add_option("--dim", cfg.dims, "dimensions to run (repeatable)");
  verify->add_option("--seed", cfg.seed, "rng seed");
  verify->add_option("--samples", cfg.mc_samples, "mc samples");
  verify->add_option("--tol-exact", cfg.tol_exact, "relative tolerance for exact checks");
  verify->add_option("--tol-sigma", cfg.tol_sigma, "sigma multiplier for mc checks");
  verify->add_option("--out", out_dir, "report output directory");
  verify->add_flag("--no-oracle", [&cfg](std::int64_t) { cfg.run_oracles = false; },
                   "skip the brute-force oracle cross-checks");

  // protocol
  auto* proto = app.add_subcommand("protocol", "construct and verify one optimal network");
  std::string proto_name, proto_mode = "both", proto_json;
  int proto_dim = 2, proto_copies = 1, proto_samples = 10000;
  double proto_x = 0.5;
  std::uint64_t proto_seed = default_seed();
  proto->add_option("name", proto_name,
                    "cloner | inverter | learner | tradeoff | measure-learn-1to1 | "
                    "measure-learn-2to1 | measure-learn-1to2 | measure-clone-1to2")
      ->required();
  proto->add_option("--dim", proto_dim, "dimension");
  proto->add_option("--x", proto_x, "tradeoff parameter x");
  proto->add_option("--copies", proto_copies, "learner copies M");
  proto->add_option("--verify", proto_mode, "exact | mc | both");
  proto->add_option("--seed", proto_seed, "rng seed");
  proto->add_option("--samples", proto_samples, "mc samples");
  proto->add_option("--json", proto_json, "write the verification report here");

  // tomo
  auto* tomo = app.add_subcommand("tomo", "tomography figures of merit");
  auto* tomo_eta = tomo->add_subcommand("eta", "closed form, exact twirl and mc value");
  std::string tomo_target = "operations";
  int tomo_dim = 2, tomo_samples = 10000;
  std::uint64_t tomo_seed = default_seed();
  tomo_eta->add_option("--target", tomo_target, "operations | channels | unital | states | effects");
  tomo_eta->add_option("--dim", tomo_dim, "dimension");
  tomo_eta->add_option("--samples", tomo_samples, "mc samples");
  tomo_eta->add_option("--seed", tomo_seed, "rng seed");

  // group
  auto* group = app.add_subcommand("group", "representation projectors");
  auto* gproj = group->add_subcommand("projectors", "write projector JSON files");
  std::string rep_name = "uuustar", gout = "projectors";
  int gdim = 2;
  gproj->add_option("--rep", rep_name, "uu | uustar | uuustar");
  gproj->add_option("--dim", gdim, "dimension");
  gproj->add_option("--out", gout, "output directory");

  // comb
  auto* comb = app.add_subcommand("comb", "comb utilities");
  auto* comb_check_cmd = comb->add_subcommand("check", "verify the recursive normalization");
  std::string comb_path;
  comb_check_cmd->add_option("file", comb_path, "comb JSON file")->required();

  // tradeoff
  auto* curve = app.add_subcommand("tradeoff", "emit the tradeoff curve CSV");
  int curve_dim = 2, curve_points = 101;
  std::string curve_out = "tradeoff.csv";
  curve->add_option("--dim", curve_dim, "dimension");
  curve->add_option("--points", curve_points, "number of x samples");
  curve->add_option("--out", curve_out, "csv path");

  // dump / load
  auto* dump = app.add_subcommand("dump", "write an identity operator JSON file");
  int dump_dim = 2;
  std::string dump_out = "operator.json";
  dump->add_option("--identity", dump_dim, "identity dimension");
  dump->add_option("--out", dump_out, "output path");

  auto* loadc = app.add_subcommand("load", "load and validate an operator JSON file");
  std::string load_path, load_out;
  loadc->add_option("file", load_path, "operator JSON file")->required();
  loadc->add_option("--out", load_out, "optional re-dump path");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*verify) return cmd_verify_all(cfg, out_dir);
    if (*proto)
      return cmd_protocol(proto_name, proto_dim, proto_x, proto_copies, proto_mode, proto_seed,
                          proto_samples, proto_json);
    if (*tomo_eta) return cmd_tomo_eta(tomo_target, tomo_dim, tomo_samples, tomo_seed);
    if (*gproj) return cmd_group_projectors(rep_name, gdim, gout);
    if (*comb_check_cmd) return cmd_comb_check(comb_path);
    if (*curve) {
      write_tradeoff_csv(curve_out, tradeoff_curve(curve_dim, curve_points));
      std::printf("wrote %s\n", curve_out.c_str());
      return 0;
    }
    if (*dump) {
      save_json(dump_out, to_json(LabeledOp::identity({{0, dump_dim}})));
      std::printf("wrote %s\n", dump_out.c_str());
      return 0;
    }
    if (*loadc) {
      LabeledOp op = labeled_op_from_json(load_json(load_path));
      std::printf("ok: %d wires, dimension %d, trace %.12g%+.12gi\n", op.wire_count(), op.dim(),
                  op.mat().trace().real(), op.mat().trace().imag());
      if (!load_out.empty()) save_json(load_out, to_json(op));
      return 0;
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
