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

#include "combkit/io.hpp"

#include <cstdio>
#include <fstream>

namespace combkit {

using nlohmann::json;

json to_json(const CMat& m) {
  json j;
  j["rows"] = m.rows();
  j["cols"] = m.cols();
  std::vector<double> re, im;
  re.reserve(m.data().size());
  im.reserve(m.data().size());
  for (const cplx& z : m.data()) {
    re.push_back(z.real());
    im.push_back(z.imag());
  }
  j["re"] = std::move(re);
  j["im"] = std::move(im);
  return j;
}

json to_json(const LabeledOp& op) {
  json j = to_json(op.mat());
  json wires = json::array();
  for (const Wire& w : op.wires()) wires.push_back({{"label", w.label}, {"dim", w.dim}});
  j["wires"] = std::move(wires);
  return j;
}

json to_json(const Channel& ch) {
  return json{{"choi", to_json(ch.choi)}, {"in", ch.in_wires}, {"out", ch.out_wires}};
}

json to_json(const Comb& comb) {
  json j = to_json(comb.choi);
  json teeth = json::array();
  for (const Tooth& t : comb.teeth) teeth.push_back(json::array({t.in, t.out}));
  j["teeth"] = std::move(teeth);
  j["flavor"] = comb.flavor == CombFlavor::deterministic ? "det" : "prob";
  return j;
}

json to_json(const VerificationReport& r) {
  return json{{"protocol", r.protocol}, {"dim", r.dim},         {"target", r.target},
              {"exact", r.exact},       {"mc", r.mc},           {"stderr", r.mc_stderr},
              {"pass_exact", r.pass_exact}, {"pass_mc", r.pass_mc}, {"seed", r.seed},
              {"samples", r.samples},   {"ms", r.ms},           {"note", r.note}};
}

CMat cmat_from_json(const json& j) {
  if (!j.contains("rows") || !j.contains("cols") || !j.contains("re") || !j.contains("im"))
    throw numeric_error("matrix JSON: missing rows/cols/re/im field");
  int rows = j.at("rows").get<int>();
  int cols = j.at("cols").get<int>();
  auto re = j.at("re").get<std::vector<double>>();
  auto im = j.at("im").get<std::vector<double>>();
  if (re.size() != im.size() || re.size() != static_cast<size_t>(rows) * cols)
    throw numeric_error("matrix JSON: entry count does not match rows*cols");
  std::vector<cplx> entries(re.size());
  for (size_t i = 0; i < re.size(); ++i) entries[i] = cplx(re[i], im[i]);
  return CMat(rows, cols, std::move(entries));  // constructor rejects non-finite
}

LabeledOp labeled_op_from_json(const json& j) {
  CMat m = cmat_from_json(j);
  if (!j.contains("wires")) throw numeric_error("labeled operator JSON: missing wires");
  std::vector<Wire> wires;
  for (const auto& w : j.at("wires"))
    wires.push_back({w.at("label").get<int>(), w.at("dim").get<int>()});
  return LabeledOp(std::move(wires), std::move(m));  // validates dim product
}

Channel channel_from_json(const json& j) {
  Channel ch;
  ch.choi = labeled_op_from_json(j.at("choi"));
  ch.in_wires = j.at("in").get<std::vector<int>>();
  ch.out_wires = j.at("out").get<std::vector<int>>();
  return ch;
}

Comb comb_from_json(const json& j) {
  Comb comb;
  comb.choi = labeled_op_from_json(j);
  for (const auto& t : j.at("teeth")) {
    Tooth tooth;
    tooth.in = t.at(0).get<std::vector<int>>();
    tooth.out = t.at(1).get<std::vector<int>>();
    comb.teeth.push_back(std::move(tooth));
  }
  std::string flavor = j.value("flavor", "det");
  comb.flavor = flavor == "prob" ? CombFlavor::probabilistic : CombFlavor::deterministic;
  return comb;
}

void save_json(const std::string& path, const json& j) {
  std::ofstream f(path);
  if (!f) throw numeric_error("cannot open for writing: " + path);
  f << j.dump(1) << "\n";
}

json load_json(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw numeric_error("cannot open for reading: " + path);
  json j;
  try {
    f >> j;
  } catch (const json::parse_error& e) {
    throw numeric_error("parse error in " + path + ": " + e.what());
  }
  return j;
}

void write_tradeoff_csv(const std::string& path, const std::vector<TradeoffRow>& rows) {
  std::ofstream f(path);
  if (!f) throw numeric_error("cannot open for writing: " + path);
  f << "x,y,F,G,I,D,residual\n";
  char buf[256];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", r.x, r.y, r.f,
                  r.g, r.info, r.dist, r.residual);
    f << buf;
  }
}

}  // namespace combkit
