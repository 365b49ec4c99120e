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
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mdph/error.hpp"
#include "mdph/rng.hpp"

namespace mdph {

inline constexpr double kRowTol = 1e-9;

// ---------------------------------------------------------------------------
// Reward distributions
// ---------------------------------------------------------------------------

enum class RewardKind { Deterministic, ScaledBeta };

/// Per-(s,a) reward distribution with support inside [r_min, r_max].
struct RewardDist {
  RewardKind kind = RewardKind::Deterministic;
  double mean_value = 0.0;           // Deterministic
  double alpha = 1.0, beta = 1.0;    // ScaledBeta shape parameters
  double r_min = 0.0, r_max = 1.0;

  static RewardDist deterministic(double mean, double r_min = 0.0, double r_max = 1.0);

  /// Beta scaled to [r_min, r_max] with the given mean; the variance knob is
  /// expressed in units of range^2 and clamped to keep the shapes valid.
  /// Means at the support boundary degrade gracefully to Deterministic.
  static RewardDist scaled_beta(double mean, double variance_knob, double r_min = 0.0,
                                double r_max = 1.0);

  double mean() const;
  double variance() const;
  double sample(Rng& rng) const;
};

// ---------------------------------------------------------------------------
// Setting
// ---------------------------------------------------------------------------

struct Setting {
  bool episodic = false;
  int horizon = 0;  // valid iff episodic

  static Setting continuous() { return Setting{false, 0}; }
  static Setting episodic_with(int h) { return Setting{true, h}; }
};

// ---------------------------------------------------------------------------
// TabularMdp
// ---------------------------------------------------------------------------

/// Explicit finite MDP. Dense transition tensor [s][a][s'] (row-major),
/// one reward distribution per (s,a), an initial distribution and a setting.
/// Immutable after construction by convention; all operations return copies.
struct TabularMdp {
  int n_states = 0;
  int n_actions = 0;
  std::vector<double> transition;    // n_states * n_actions * n_states
  std::vector<RewardDist> reward;    // n_states * n_actions
  std::vector<double> initial_dist;  // n_states
  Setting setting;
  double r_min = 0.0;
  double r_max = 1.0;
  std::map<std::string, std::string> metadata;
  /// Optional per-state identifying coordinates (used by the state-info
  /// emission map); empty when the MDP was not built by a family generator.
  std::vector<std::vector<double>> state_info;

  const double* row(int s, int a) const {
    return &transition[(static_cast<std::size_t>(s) * n_actions + a) * n_states];
  }
  double* row(int s, int a) {
    return &transition[(static_cast<std::size_t>(s) * n_actions + a) * n_states];
  }
  const RewardDist& reward_at(int s, int a) const {
    return reward[static_cast<std::size_t>(s) * n_actions + a];
  }
  RewardDist& reward_at(int s, int a) {
    return reward[static_cast<std::size_t>(s) * n_actions + a];
  }
  double mean_reward(int s, int a) const { return reward_at(s, a).mean(); }

  /// True when every transition row is a point mass.
  bool deterministic_kernel() const;
};

// ---------------------------------------------------------------------------
// Policy
// ---------------------------------------------------------------------------

/// Stochastic state -> action distribution; optionally indexed by the
/// in-episode time step h for episodic MDPs.
struct Policy {
  int n_states = 0;
  int n_actions = 0;
  int horizon = 0;  // 0 = stationary, otherwise time-indexed with H slices
  std::vector<double> probs;  // [h]*[s][a] (h absent when stationary)

  bool time_indexed() const { return horizon > 0; }

  static Policy stationary_uniform(int n_states, int n_actions);
  static Policy stationary_deterministic(const std::vector<int>& actions, int n_actions);
  /// Time-indexed deterministic policy from per-h action tables [h][s].
  static Policy time_indexed_deterministic(const std::vector<std::vector<int>>& actions,
                                           int n_actions);

  const double* row(int s) const { return &probs[static_cast<std::size_t>(s) * n_actions]; }
  const double* row(int h, int s) const {
    return &probs[(static_cast<std::size_t>(h) * n_states + s) * n_actions];
  }
  double prob(int s, int a) const { return row(s)[a]; }
  double prob(int h, int s, int a) const { return row(h, s)[a]; }

  /// Validate shapes and row stochasticity against an MDP.
  void validate_for(const TabularMdp& mdp) const;

  int sample(int s, Rng& rng) const;
  int sample(int h, int s, Rng& rng) const;
};

// ---------------------------------------------------------------------------
// MarkovChain
// ---------------------------------------------------------------------------

/// Row-stochastic chain over the MDP's states, typically induced by a policy.
struct MarkovChain {
  int n_states = 0;
  std::vector<double> transition;  // n_states * n_states
  mutable std::optional<std::vector<double>> stationary_cache;

  const double* row(int s) const { return &transition[static_cast<std::size_t>(s) * n_states]; }
  double* row(int s) { return &transition[static_cast<std::size_t>(s) * n_states]; }
};

// ---------------------------------------------------------------------------
// Communication classes
// ---------------------------------------------------------------------------

enum class CommClass { Ergodic, Communicating, WeaklyCommunicating, NonWeaklyCommunicating };

const char* to_string(CommClass c);

struct CommunicationClass {
  CommClass value = CommClass::NonWeaklyCommunicating;
  /// "exact" everywhere except the all-policy aperiodicity sub-check, which
  /// falls back to sampled deterministic policies on structured kernels.
  std::string certification = "exact";
};

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

/// Validate and assemble an MDP. Rows are renormalized only when they are
/// within kRowTol of stochastic; larger deviations are rejected.
TabularMdp build_mdp(int n_states, int n_actions, std::vector<double> transition,
                     std::vector<RewardDist> reward, std::vector<double> initial_dist,
                     Setting setting, double r_min = 0.0, double r_max = 1.0);

/// Apply the random-action mix (probability p_rand) followed by the lazy mix
/// (probability p_lazy). Rewards are untouched. (0, 0) returns the input
/// kernel bit-for-bit.
TabularMdp perturb_kernel(const TabularMdp& mdp, double p_rand, double p_lazy);

/// Augment an episodic MDP with the in-episode time step: states become
/// (s, h) indexed h * n_states + s; rows at h = H-1 resample from P0 into
/// h = 0. The result is a continuous MDP.
TabularMdp episodic_augment(const TabularMdp& mdp);

/// Index helpers for the augmented layout.
inline int augmented_index(int s, int h, int n_states) { return h * n_states + s; }

/// T(s'|s) = sum_a pi(a|s) P(s'|s,a). Deterministic policies reproduce the
/// selected action's rows exactly (zero-weight terms are skipped).
MarkovChain induced_chain(const TabularMdp& mdp, const Policy& policy);

/// Strongest certifiable communication class. Episodic MDPs are augmented
/// internally and restricted to the states reachable from P0.
CommunicationClass classify_communication(const TabularMdp& mdp);

// Support-graph utilities shared with the hardness module.

/// Directed edges s -> s' present under some action (P(s'|s,a) > 0).
std::vector<std::vector<int>> support_graph(const TabularMdp& mdp);

/// Strongly connected components (Tarjan); returns component id per state,
/// ids in reverse topological order (0 = a sink component).
std::vector<int> strongly_connected_components(const std::vector<std::vector<int>>& adj,
                                               int* n_components);

/// States reachable from the support of P0 in the support graph.
std::vector<char> reachable_states(const TabularMdp& mdp);

/// Largest set of states from which `target` is reached with probability 1
/// under some policy (almost-sure reachability; target itself included).
std::vector<char> almost_sure_reach_set(const TabularMdp& mdp, int target);

/// Period of an irreducible chain (gcd of cycle lengths); 0 if reducible.
int chain_period(const MarkovChain& chain);

/// Project an MDP onto the states flagged in `keep`. Kept rows must carry no
/// mass into dropped states (true for reachable-state pruning).
TabularMdp restrict_states(const TabularMdp& mdp, const std::vector<char>& keep);

/// True when every state can reach every other in the chain's support.
bool chain_irreducible(const MarkovChain& chain);

}  // namespace mdph
