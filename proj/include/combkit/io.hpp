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

#pragma once

#include <string>

#include <json.hpp>

#include "combkit/comb.hpp"
#include "combkit/protocols.hpp"
#include "combkit/verify.hpp"

namespace combkit {

// Interchange formats. Matrices: {"rows", "cols", "re": [...], "im": [...]},
// row-major. Labeled operators add {"wires": [{"label", "dim"}, ...]}.
nlohmann::json to_json(const CMat& m);
nlohmann::json to_json(const LabeledOp& op);
nlohmann::json to_json(const Channel& ch);
nlohmann::json to_json(const Comb& comb);
nlohmann::json to_json(const VerificationReport& report);

CMat cmat_from_json(const nlohmann::json& j);
LabeledOp labeled_op_from_json(const nlohmann::json& j);
Channel channel_from_json(const nlohmann::json& j);
Comb comb_from_json(const nlohmann::json& j);

void save_json(const std::string& path, const nlohmann::json& j);
nlohmann::json load_json(const std::string& path);

// Tradeoff curve CSV: header x,y,F,G,I,D,residual; C-locale formatting.
void write_tradeoff_csv(const std::string& path, const std::vector<TradeoffRow>& rows);

}  // namespace combkit
