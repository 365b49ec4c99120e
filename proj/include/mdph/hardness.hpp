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

#include <limits>
#include <optional>
#include <vector>

#include "mdph/mdp.hpp"
#include "mdph/planners.hpp"

namespace mdph {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Gaps below this floor count as zero in the reciprocal sum; the measure is
/// numerically fragile, so the floor is reported alongside the result.
inline constexpr double kGapFloor = 1e-6;

/// Default discount standing in for the undiscounted environmental value
/// norm (the undiscounted variant has no displayed formula).
inline constexpr double kValueNormGamma = 0.99;

// ---------------------------------------------------------------------------
// Diameter
// ---------------------------------------------------------------------------

struct DiameterDetail {
  double value = 0.0;
  int argmax_source = -1;
  int argmax_target = -1;
  /// Optimal expected arrival times for the argmax target (one per source;
  /// +inf where unreachable) and the minimizing action per source.
  std::vector<double> times_to_argmax_target;
  std::vector<int> policy_to_argmax_target;
};

/// Worst-case over ordered pairs of the minimal expected first-passage time.
/// Episodic MDPs are augmented with the in-episode step, and sources/targets
/// are restricted to augmented states reachable from P0 (every such state
/// recurs across episodes, so the value is finite). Unreachable pairs yield
/// +inf in the continuous case. Targets are solved in parallel.
double diameter(const TabularMdp& mdp, int jobs = 0);

DiameterDetail diameter_detail(const TabularMdp& mdp, int jobs = 0);

// ---------------------------------------------------------------------------
// Environmental value norm
// ---------------------------------------------------------------------------

/// Continuous/discounted: max_(s,a) sqrt(Var_{s'~P(s,a)} V(s')). Episodic:
/// max over the time-augmented state-actions of Var R(s,a) + Var V(next),
/// where the episode-boundary rows resample the next episode's start from
/// P0. When no policy is given, the optimal policy's value function is used.
/// A continuous MDP without a discount uses gamma = kValueNormGamma.
double environmental_value_norm(const TabularMdp& mdp,
                                const std::optional<Policy>& policy = std::nullopt,
                                std::optional<double> gamma = std::nullopt);

// ---------------------------------------------------------------------------
// Sub-optimality gaps
// ---------------------------------------------------------------------------

struct GapResult {
  double reciprocal_sum = 0.0;
  double gap_floor = kGapFloor;
  /// Delta(s,a) = V*(s) - Q*(s,a); laid out as the solution's q table.
  std::vector<double> gaps;
};

GapResult gap_reciprocal_sum(const TabularMdp& mdp, const Criterion& criterion);

// ---------------------------------------------------------------------------
// Chain statistics
// ---------------------------------------------------------------------------

/// Stationary distribution of a unichain (residual ||mu T - mu||_inf <=
/// 1e-10); multichain inputs get per-class results via the _per_class
/// variant, and this function throws MultichainAmbiguity.
std::vector<double> stationary_distribution(const MarkovChain& chain);

struct StationaryPerClass {
  std::vector<int> class_of_state;          // -1 = transient
  std::vector<std::vector<double>> class_distributions;  // full-size, zero off-class
};

StationaryPerClass stationary_distributions_per_class(const MarkovChain& chain);

/// Smallest n with sup_s d_TV(p_s^n, mu) <= threshold. Requires an ergodic
/// chain; capped at n_max.
int mixing_time(const MarkovChain& chain, double threshold = 0.25, int n_max = 1000000);

/// sum_s mu*_s / mu^pi_s for a given policy pair's stationary distributions;
/// 0/0 counts as 0, positive/0 gives +inf.
double distribution_mismatch_ratio(const std::vector<double>& optimal_stationary,
                                   const std::vector<double>& policy_stationary);

/// (v - min) / (max - min), clamped to [0, 1].
double normalize_measure(double value, double min_value, double max_value);

// ---------------------------------------------------------------------------
// HardnessReport
// ---------------------------------------------------------------------------

struct ChainStats {
  std::optional<int> mixing_time;       // of the optimal policy's chain
  std::optional<double> mismatch_ratio; // optimal vs uniform-random policy
};

struct NormalizedMeasures {
  double diameter = 0.0, value_norm = 0.0, gap_sum = 0.0;
  double d_min = 0.0, d_max = 0.0, c_min = 0.0, c_max = 0.0, g_min = 0.0, g_max = 0.0;
};

struct HardnessReport {
  double diameter = 0.0;
  double value_norm = 0.0;
  double gap_sum = 0.0;
  double gap_floor = kGapFloor;
  CommunicationClass comm_class;
  std::optional<ChainStats> chain_stats;
  std::optional<NormalizedMeasures> normalized;
};

/// Compute the efficiently-computable measures for one MDP. The criterion is
/// inferred from the setting (episodic -> episodic, continuous -> average
/// reward with the kValueNormGamma stand-in for the value norm).
HardnessReport analyze_hardness(const TabularMdp& mdp, bool with_chain_stats = false,
                                int jobs = 0);

}  // namespace mdph
