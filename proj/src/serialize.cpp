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

#include "mdph/serialize.hpp"

#include <cstdint>
#include <fstream>
#include <sstream>

namespace mdph {

Json reward_to_json(const RewardDist& r) {
  Json j;
  if (r.kind == RewardKind::Deterministic) {
    j["kind"] = "deterministic";
    j["params"] = {{"mean", r.mean_value}};
  } else {
    j["kind"] = "scaled_beta";
    j["params"] = {{"alpha", r.alpha}, {"beta", r.beta}, {"r_min", r.r_min}, {"r_max", r.r_max}};
  }
  return j;
}

RewardDist reward_from_json(const Json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  const Json& p = j.at("params");
  if (kind == "deterministic") {
    RewardDist r;
    r.kind = RewardKind::Deterministic;
    r.mean_value = p.at("mean").get<double>();
    return r;
  }
  if (kind == "scaled_beta") {
    RewardDist r;
    r.kind = RewardKind::ScaledBeta;
    r.alpha = p.at("alpha").get<double>();
    r.beta = p.at("beta").get<double>();
    r.r_min = p.at("r_min").get<double>();
    r.r_max = p.at("r_max").get<double>();
    r.mean_value = r.mean();
    return r;
  }
  throw Error("ParseError", "unknown reward kind '" + kind + "'");
}

Json mdp_to_json(const TabularMdp& mdp) {
  Json j;
  j["n_states"] = mdp.n_states;
  j["n_actions"] = mdp.n_actions;

  Json transition = Json::array();
  for (int s = 0; s < mdp.n_states; ++s) {
    Json per_state = Json::array();
    for (int a = 0; a < mdp.n_actions; ++a) {
      const double* row = mdp.row(s, a);
      per_state.push_back(Json(std::vector<double>(row, row + mdp.n_states)));
    }
    transition.push_back(std::move(per_state));
  }
  j["transition"] = std::move(transition);

  Json reward = Json::array();
  for (int s = 0; s < mdp.n_states; ++s) {
    Json per_state = Json::array();
    for (int a = 0; a < mdp.n_actions; ++a) per_state.push_back(reward_to_json(mdp.reward_at(s, a)));
    reward.push_back(std::move(per_state));
  }
  j["reward"] = std::move(reward);

  j["initial_dist"] = mdp.initial_dist;
  if (mdp.setting.episodic)
    j["setting"] = {{"kind", "episodic"}, {"horizon", mdp.setting.horizon}};
  else
    j["setting"] = {{"kind", "continuous"}};
  j["r_min"] = mdp.r_min;
  j["r_max"] = mdp.r_max;
  j["metadata"] = mdp.metadata;
  if (!mdp.state_info.empty()) j["state_info"] = mdp.state_info;
  return j;
}

TabularMdp mdp_from_json(const Json& j) {
  const int S = j.at("n_states").get<int>();
  const int A = j.at("n_actions").get<int>();
  std::vector<double> transition(static_cast<std::size_t>(S) * A * S);
  const Json& tj = j.at("transition");
  for (int s = 0; s < S; ++s)
    for (int a = 0; a < A; ++a) {
      const auto row = tj.at(s).at(a).get<std::vector<double>>();
      if (static_cast<int>(row.size()) != S) throw Error("ParseError", "transition row length");
      std::copy(row.begin(), row.end(),
                transition.begin() + (static_cast<std::size_t>(s) * A + a) * S);
    }
  std::vector<RewardDist> reward(static_cast<std::size_t>(S) * A);
  const Json& rj = j.at("reward");
  const double r_min = j.value("r_min", 0.0);
  const double r_max = j.value("r_max", 1.0);
  for (int s = 0; s < S; ++s)
    for (int a = 0; a < A; ++a) {
      RewardDist r = reward_from_json(rj.at(s).at(a));
      if (r.kind == RewardKind::Deterministic) {
        r.r_min = r_min;
        r.r_max = r_max;
      }
      reward[static_cast<std::size_t>(s) * A + a] = r;
    }
  auto initial = j.at("initial_dist").get<std::vector<double>>();
  Setting setting = Setting::continuous();
  const Json& sj = j.at("setting");
  if (sj.at("kind").get<std::string>() == "episodic")
    setting = Setting::episodic_with(sj.at("horizon").get<int>());

  TabularMdp mdp = build_mdp(S, A, std::move(transition), std::move(reward), std::move(initial),
                             setting, r_min, r_max);
  if (j.contains("metadata"))
    mdp.metadata = j.at("metadata").get<std::map<std::string, std::string>>();
  if (j.contains("state_info"))
    mdp.state_info = j.at("state_info").get<std::vector<std::vector<double>>>();
  return mdp;
}

Json hardness_report_to_json(const HardnessReport& report) {
  Json j;
  j["diameter"] = std::isinf(report.diameter) ? Json("inf") : Json(report.diameter);
  j["value_norm"] = report.value_norm;
  j["gap_reciprocal_sum"] = report.gap_sum;
  j["gap_floor"] = report.gap_floor;
  j["communication_class"] = to_string(report.comm_class.value);
  j["class_certification"] = report.comm_class.certification;
  if (report.chain_stats.has_value()) {
    Json stats;
    if (report.chain_stats->mixing_time.has_value())
      stats["mixing_time"] = *report.chain_stats->mixing_time;
    if (report.chain_stats->mismatch_ratio.has_value()) {
      const double r = *report.chain_stats->mismatch_ratio;
      stats["mismatch_ratio"] = std::isinf(r) ? Json("inf") : Json(r);
    }
    j["chain_stats"] = std::move(stats);
  }
  if (report.normalized.has_value()) {
    const auto& n = *report.normalized;
    j["normalized"] = {
        {"diameter", n.diameter},
        {"value_norm", n.value_norm},
        {"gap_reciprocal_sum", n.gap_sum},
        {"context",
         {{"d_min", n.d_min}, {"d_max", n.d_max}, {"c_min", n.c_min}, {"c_max", n.c_max},
          {"g_min", n.g_min}, {"g_max", n.g_max}}},
    };
  }
  return j;
}

Json value_solution_to_json(const ValueSolution& sol) {
  Json j;
  switch (sol.criterion.kind) {
    case Criterion::Kind::Episodic:
      j["criterion"] = {{"kind", "episodic"}, {"horizon", sol.horizon}};
      break;
    case Criterion::Kind::Discounted:
      j["criterion"] = {{"kind", "discounted"}, {"gamma", sol.criterion.gamma}};
      break;
    case Criterion::Kind::AverageReward:
      j["criterion"] = {{"kind", "average_reward"}};
      j["gain"] = sol.gain;
      j["bias"] = sol.bias;
      break;
  }
  j["v"] = sol.v;
  j["q"] = sol.q;
  j["greedy"] = {{"n_states", sol.greedy.n_states},
                 {"n_actions", sol.greedy.n_actions},
                 {"horizon", sol.greedy.horizon},
                 {"probs", sol.greedy.probs}};
  return j;
}

Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("IoError", "cannot open '" + path + "' for reading");
  Json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw Error("ParseError", "cannot parse '" + path + "': " + e.what());
  }
  return j;
}

void write_json_file(const std::string& path, const Json& j) {
  write_text_file(path, j.dump(2) + "\n");
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw Error("IoError", "cannot open '" + path + "' for writing");
  out << text;
  if (!out) throw Error("IoError", "failed writing '" + path + "'");
}

std::string config_hash(const Json& j) {
  const std::string dump = j.dump();
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char c : dump) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  std::ostringstream out;
  out << std::hex << h;
  return out.str();
}

}  // namespace mdph
