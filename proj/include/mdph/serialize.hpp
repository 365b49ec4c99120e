// Copyright 2026-present the mdph project
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

#include "mdph/hardness.hpp"
#include "mdph/mdp.hpp"

namespace mdph {

using Json = nlohmann::json;

/// MDP <-> JSON. Doubles round-trip bit-exactly (shortest-representation
/// printing), so Deterministic-reward MDPs serialize losslessly and
/// ScaledBeta rewards keep their parameters exactly.
Json mdp_to_json(const TabularMdp& mdp);
TabularMdp mdp_from_json(const Json& j);

Json reward_to_json(const RewardDist& r);
RewardDist reward_from_json(const Json& j);

Json hardness_report_to_json(const HardnessReport& report);

Json value_solution_to_json(const ValueSolution& sol);

/// Read/write helpers; errors surface as Error("IoError", ...).
Json load_json_file(const std::string& path);
void write_json_file(const std::string& path, const Json& j);
void write_text_file(const std::string& path, const std::string& text);

/// FNV-1a hash of a canonical JSON dump, for provenance headers.
std::string config_hash(const Json& j);

}  // namespace mdph
