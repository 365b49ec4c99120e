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

#include <vector>

#include "mdph/mdp.hpp"

namespace mdph {

// ---------------------------------------------------------------------------
// Criterion / ValueSolution
// ---------------------------------------------------------------------------

struct Criterion {
  enum class Kind { Episodic, Discounted, AverageReward };
  Kind kind = Kind::Discounted;
  double gamma = 0.99;

  static Criterion episodic() { return {Kind::Episodic, 0.0}; }
  static Criterion discounted(double gamma) { return {Kind::Discounted, gamma}; }
  static Criterion average_reward() { return {Kind::AverageReward, 0.0}; }
};

/// Values produced by the exact solvers. Episodic solutions carry H+1 value
/// slices (V_H == 0) and H state-action slices; the other criteria carry one.
struct ValueSolution {
  Criterion criterion;
  int n_states = 0;
  int n_actions = 0;
  int horizon = 0;  // 0 unless episodic
  std::vector<double> v;  // [(H+1) * S] episodic, [S] otherwise
  std::vector<double> q;  // [H * S * A] episodic, [S * A] otherwise
  Policy greedy;
  double gain = 0.0;          // AverageReward only
  std::vector<double> bias;   // AverageReward only (anchored at state 0)
  int iterations = 0;

  double value_at(int s) const { return v[s]; }
  double value_at(int h, int s) const {
    return v[static_cast<std::size_t>(h) * n_states + s];
  }
  double q_at(int s, int a) const { return q[static_cast<std::size_t>(s) * n_actions + a]; }
  double q_at(int h, int s, int a) const {
    return q[(static_cast<std::size_t>(h) * n_states + s) * n_actions + a];
  }
  /// Start-distribution-weighted value (episodic: h = 0 slice).
  double start_value(const TabularMdp& mdp) const;
};

// ---------------------------------------------------------------------------
// Optimal solvers
// ---------------------------------------------------------------------------

/// Exact finite-horizon dynamic programming; greedy ties break to the lowest
/// action index.
ValueSolution backward_induction(const TabularMdp& mdp);

/// Discounted value iteration; stops when the sup-norm update falls below
/// tol * (1 - gamma) / (2 * gamma).
ValueSolution value_iteration_discounted(const TabularMdp& mdp, double gamma, double tol = 1e-8);

/// Relative value iteration for the average-reward criterion (anchored at
/// state 0). Requires an at-least-weakly-communicating MDP; periodic corner
/// cases surface as NoConvergence with the advice to add p_lazy.
ValueSolution relative_value_iteration(const TabularMdp& mdp, double tol = 1e-6);

/// Dispatch on the criterion (episodic MDPs use backward induction).
ValueSolution optimal_solution(const TabularMdp& mdp, const Criterion& criterion);

// ---------------------------------------------------------------------------
// Policy evaluation
// ---------------------------------------------------------------------------

/// Evaluate a fixed policy. Episodic: exact backward recursion. Discounted:
/// direct linear solve. AverageReward: rho = <mu, R> per recurrent class of
/// the induced chain; throws MultichainAmbiguity when the start distribution
/// reaches several recurrent classes.
ValueSolution policy_evaluation(const TabularMdp& mdp, const Policy& policy,
                                const Criterion& criterion);

/// Recurrent-class structure of the chain induced by a stationary policy.
struct AverageRewardDecomposition {
  std::vector<int> class_of_state;     // -1 for transient states
  std::vector<double> class_gains;     // one gain per recurrent class
  std::vector<double> class_weights;   // P0-weighted absorption probabilities
  double start_weighted_gain = 0.0;
  bool ambiguous = false;              // start reaches several classes
};

AverageRewardDecomposition average_reward_decomposition(const TabularMdp& mdp,
                                                        const Policy& policy);

/// Long-run average reward from the start distribution: absorption-weighted
/// mixture of the per-class gains. Total on multichain policies; equal to
/// policy_evaluation's gain whenever the latter is unambiguous.
double average_reward_from_start(const TabularMdp& mdp, const Policy& policy);

/// Negate all reward means (worst-policy construction); distribution shapes
/// are dropped since only means matter for planning.
TabularMdp negate_rewards(const TabularMdp& mdp);

}  // namespace mdph
