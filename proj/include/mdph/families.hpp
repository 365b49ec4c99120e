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

#include <cstdint>
#include <string>

#include "mdph/mdp.hpp"

namespace mdph::families {

enum class Family {
  RiverSwim,
  DeepSea,
  SimpleGrid,
  FrozenLake,
  MiniGridEmpty,
  MiniGridRooms,
  MiniGridDoorKey,
  Taxi,
};

const char* to_string(Family f);
Family family_from_string(const std::string& name);

/// Generation parameters shared by every family. A horizon of 0 selects the
/// family default: size for DeepSea, 2*size for RiverSwim, 2*(size-1) for
/// the grid families.
struct FamilySpec {
  Family family = Family::RiverSwim;
  int size = 5;
  double p_rand = 0.0;
  double p_lazy = 0.0;
  bool make_reward_stochastic = false;
  double reward_variance = 0.05;  // in units of (r_max - r_min)^2
  double r_min = 0.0;
  double r_max = 1.0;
  bool episodic = false;
  int horizon = 0;  // 0 = family default when episodic
  std::uint64_t seed = 0;
};

int family_min_size(Family f);
int default_horizon(Family f, int size);

/// Instantiate the family: build the base kernel, optionally make rewards
/// stochastic, then pass through perturb_kernel(p_rand, p_lazy). The result
/// is deterministic given the spec (including the seed) and always passes
/// build_mdp validation. DeepSea rejects p_lazy > 0 (UnsupportedParam).
TabularMdp generate(const FamilySpec& spec);

/// Uniformly sample size and perturbation probabilities (candidate pools for
/// suite selection). Deterministic per seed; DeepSea keeps p_lazy = 0.
FamilySpec sample_spec(Family family, std::uint64_t seed, int size_lo, int size_hi,
                       double stochasticity_lo, double stochasticity_hi);

}  // namespace mdph::families
