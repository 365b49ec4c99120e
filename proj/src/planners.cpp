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

#include "mdph/planners.hpp"

#include <algorithm>
#include <cmath>

#include "mdph/hardness.hpp"
#include "mdph/kernels.hpp"
#include "mdph/linalg.hpp"

namespace mdph {

double ValueSolution::start_value(const TabularMdp& mdp) const {
  return kernels::dot(mdp.initial_dist.data(), v.data(), static_cast<std::size_t>(n_states));
}

// ---------------------------------------------------------------------------
// Backward induction
// ---------------------------------------------------------------------------

ValueSolution backward_induction(const TabularMdp& mdp) {
  if (!mdp.setting.episodic)
    throw Error("NotEpisodic", "backward induction needs an episodic MDP");
  const int S = mdp.n_states;
  const int A = mdp.n_actions;
  const int H = mdp.setting.horizon;

  ValueSolution sol;
  sol.criterion = Criterion::episodic();
  sol.n_states = S;
  sol.n_actions = A;
  sol.horizon = H;
  sol.v.assign(static_cast<std::size_t>(H + 1) * S, 0.0);
  sol.q.assign(static_cast<std::size_t>(H) * S * A, 0.0);

  std::vector<std::vector<int>> greedy(static_cast<std::size_t>(H),
                                       std::vector<int>(static_cast<std::size_t>(S), 0));
  for (int h = H - 1; h >= 0; --h) {
    const double* v_next = &sol.v[static_cast<std::size_t>(h + 1) * S];
    double* v_h = &sol.v[static_cast<std::size_t>(h) * S];
    for (int s = 0; s < S; ++s) {
      double best = -kInf;
      int best_a = 0;
      for (int a = 0; a < A; ++a) {
        const double qa =
            mdp.mean_reward(s, a) + kernels::dot(mdp.row(s, a), v_next, static_cast<std::size_t>(S));
        sol.q[(static_cast<std::size_t>(h) * S + s) * A + a] = qa;
        if (qa > best) {
          best = qa;
          best_a = a;
        }
      }
      v_h[s] = best;
      greedy[h][s] = best_a;
    }
  }
  sol.greedy = Policy::time_indexed_deterministic(greedy, A);
  sol.iterations = H;
  return sol;
}

// ---------------------------------------------------------------------------
// Discounted value iteration
// ---------------------------------------------------------------------------

ValueSolution value_iteration_discounted(const TabularMdp& mdp, double gamma, double tol) {
  if (gamma <= 0.0 || gamma >= 1.0)
    throw Error("ParamOutOfRange", "gamma must be in (0,1), got " + std::to_string(gamma));
  if (tol <= 0.0) throw Error("NonPositiveTol", "tol must be positive");
  const int S = mdp.n_states;
  const int A = mdp.n_actions;
  const double stop = tol * (1.0 - gamma) / (2.0 * gamma);

  std::vector<double> v(static_cast<std::size_t>(S), 0.0), next(static_cast<std::size_t>(S));
  int iters = 0;
  for (;;) {
    ++iters;
    for (int s = 0; s < S; ++s) {
      double best = -kInf;
      for (int a = 0; a < A; ++a) {
        const double qa = mdp.mean_reward(s, a) +
                          gamma * kernels::dot(mdp.row(s, a), v.data(), static_cast<std::size_t>(S));
        if (qa > best) best = qa;
      }
      next[s] = best;
    }
    const double delta = kernels::max_abs_diff(v.data(), next.data(), static_cast<std::size_t>(S));
    v.swap(next);
    if (delta <= stop) break;
  }

  ValueSolution sol;
  sol.criterion = Criterion::discounted(gamma);
  sol.n_states = S;
  sol.n_actions = A;
  sol.v = v;
  sol.q.assign(static_cast<std::size_t>(S) * A, 0.0);
  sol.iterations = iters;
  std::vector<int> greedy(static_cast<std::size_t>(S), 0);
  for (int s = 0; s < S; ++s) {
    int best_a = 0;
    double best = -kInf;
    for (int a = 0; a < A; ++a) {
      const double qa = mdp.mean_reward(s, a) +
                        gamma * kernels::dot(mdp.row(s, a), v.data(), static_cast<std::size_t>(S));
      sol.q[static_cast<std::size_t>(s) * A + a] = qa;
      if (qa > best) {
        best = qa;
        best_a = a;
      }
    }
    greedy[s] = best_a;
  }
  sol.greedy = Policy::stationary_deterministic(greedy, A);
  return sol;
}

// ---------------------------------------------------------------------------
// Relative value iteration
// ---------------------------------------------------------------------------

namespace {

/// Core RVI loop without the communication-class precondition check (the
/// posterior-sampling agent calls this on dense sampled kernels).
ValueSolution rvi_core(const TabularMdp& mdp, double tol, long max_iters) {
  const int S = mdp.n_states;
  const int A = mdp.n_actions;
  std::vector<double> w(static_cast<std::size_t>(S), 0.0), u(static_cast<std::size_t>(S));

  double best_span = kInf;
  long stale = 0;
  long iters = 0;
  double gain = 0.0;
  for (iters = 1; iters <= max_iters; ++iters) {
    for (int s = 0; s < S; ++s) {
      double best = -kInf;
      for (int a = 0; a < A; ++a) {
        const double qa =
            mdp.mean_reward(s, a) + kernels::dot(mdp.row(s, a), w.data(), static_cast<std::size_t>(S));
        if (qa > best) best = qa;
      }
      u[s] = best;
    }
    double lo = kInf, hi = -kInf;
    for (int s = 0; s < S; ++s) {
      const double d = u[s] - w[s];
      lo = std::min(lo, d);
      hi = std::max(hi, d);
    }
    const double span = hi - lo;
    if (span <= tol) {
      gain = 0.5 * (hi + lo);
      const double anchor = u[0];
      for (int s = 0; s < S; ++s) w[s] = u[s] - anchor;
      break;
    }
    if (span < best_span * (1.0 - 1e-13)) {
      best_span = span;
      stale = 0;
    } else if (++stale > 2000) {
      throw Error("NoConvergence",
                  "relative value iteration stalled at span " + std::to_string(span) +
                      " after " + std::to_string(iters) +
                      " sweeps; the chain may be periodic - consider adding p_lazy");
    }
    const double anchor = u[0];
    for (int s = 0; s < S; ++s) w[s] = u[s] - anchor;
  }
  if (iters > max_iters)
    throw Error("NoConvergence", "relative value iteration hit the iteration cap of " +
                                     std::to_string(max_iters));

  ValueSolution sol;
  sol.criterion = Criterion::average_reward();
  sol.n_states = S;
  sol.n_actions = A;
  sol.gain = gain;
  sol.bias = w;
  sol.v = w;
  sol.q.assign(static_cast<std::size_t>(S) * A, 0.0);
  sol.iterations = static_cast<int>(std::min<long>(iters, 1 << 30));
  std::vector<int> greedy(static_cast<std::size_t>(S), 0);
  for (int s = 0; s < S; ++s) {
    int best_a = 0;
    double best = -kInf;
    for (int a = 0; a < A; ++a) {
      const double qa =
          mdp.mean_reward(s, a) + kernels::dot(mdp.row(s, a), w.data(), static_cast<std::size_t>(S));
      sol.q[static_cast<std::size_t>(s) * A + a] = qa;
      if (qa > best) {
        best = qa;
        best_a = a;
      }
    }
    greedy[s] = best_a;
  }
  sol.greedy = Policy::stationary_deterministic(greedy, A);
  return sol;
}

}  // namespace

ValueSolution relative_value_iteration(const TabularMdp& mdp, double tol) {
  if (mdp.setting.episodic)
    throw Error("NotContinuous", "relative value iteration needs a continuous MDP");
  const auto cls = classify_communication(mdp);
  if (cls.value == CommClass::NonWeaklyCommunicating)
    throw Error("NotWeaklyCommunicating",
                "average-reward planning needs an at-least-weakly-communicating MDP");
  return rvi_core(mdp, tol, 1000000);
}

ValueSolution optimal_solution(const TabularMdp& mdp, const Criterion& criterion) {
  switch (criterion.kind) {
    case Criterion::Kind::Episodic:
      return backward_induction(mdp);
    case Criterion::Kind::Discounted:
      return value_iteration_discounted(mdp, criterion.gamma);
    case Criterion::Kind::AverageReward:
      return relative_value_iteration(mdp);
  }
  throw Error("InvalidCriterion", "unknown criterion");
}

// ---------------------------------------------------------------------------
// Policy evaluation
// ---------------------------------------------------------------------------

namespace {

ValueSolution evaluate_episodic(const TabularMdp& mdp, const Policy& policy) {
  const int S = mdp.n_states;
  const int A = mdp.n_actions;
  const int H = mdp.setting.horizon;
  ValueSolution sol;
  sol.criterion = Criterion::episodic();
  sol.n_states = S;
  sol.n_actions = A;
  sol.horizon = H;
  sol.v.assign(static_cast<std::size_t>(H + 1) * S, 0.0);
  sol.q.assign(static_cast<std::size_t>(H) * S * A, 0.0);
  for (int h = H - 1; h >= 0; --h) {
    const double* v_next = &sol.v[static_cast<std::size_t>(h + 1) * S];
    double* v_h = &sol.v[static_cast<std::size_t>(h) * S];
    for (int s = 0; s < S; ++s) {
      double acc = 0.0;
      for (int a = 0; a < A; ++a) {
        const double qa =
            mdp.mean_reward(s, a) + kernels::dot(mdp.row(s, a), v_next, static_cast<std::size_t>(S));
        sol.q[(static_cast<std::size_t>(h) * S + s) * A + a] = qa;
        const double w = policy.time_indexed() ? policy.prob(h, s, a) : policy.prob(s, a);
        acc += w * qa;
      }
      v_h[s] = acc;
    }
  }
  sol.greedy = policy;
  return sol;
}

ValueSolution evaluate_discounted(const TabularMdp& mdp, const Policy& policy, double gamma) {
  const int S = mdp.n_states;
  const int A = mdp.n_actions;
  const auto chain = induced_chain(mdp, policy);
  std::vector<double> a_mat(static_cast<std::size_t>(S) * S, 0.0);
  std::vector<double> b(static_cast<std::size_t>(S), 0.0);
  for (int s = 0; s < S; ++s) {
    const double* row = chain.row(s);
    for (int t = 0; t < S; ++t) a_mat[static_cast<std::size_t>(s) * S + t] = -gamma * row[t];
    a_mat[static_cast<std::size_t>(s) * S + s] += 1.0;
    double r = 0.0;
    for (int a = 0; a < A; ++a) r += policy.prob(s, a) * mdp.mean_reward(s, a);
    b[s] = r;
  }
  ValueSolution sol;
  sol.criterion = Criterion::discounted(gamma);
  sol.n_states = S;
  sol.n_actions = A;
  sol.v = solve_dense(std::move(a_mat), std::move(b), S);
  sol.q.assign(static_cast<std::size_t>(S) * A, 0.0);
  for (int s = 0; s < S; ++s)
    for (int a = 0; a < A; ++a)
      sol.q[static_cast<std::size_t>(s) * A + a] =
          mdp.mean_reward(s, a) +
          gamma * kernels::dot(mdp.row(s, a), sol.v.data(), static_cast<std::size_t>(S));
  sol.greedy = policy;
  return sol;
}

}  // namespace

AverageRewardDecomposition average_reward_decomposition(const TabularMdp& mdp,
                                                        const Policy& policy) {
  const int S = mdp.n_states;
  const auto chain = induced_chain(mdp, policy);
  const auto per_class = stationary_distributions_per_class(chain);
  const int n_classes = static_cast<int>(per_class.class_distributions.size());

  AverageRewardDecomposition dec;
  dec.class_of_state = per_class.class_of_state;
  dec.class_gains.resize(static_cast<std::size_t>(n_classes));
  std::vector<double> r_pi(static_cast<std::size_t>(S), 0.0);
  for (int s = 0; s < S; ++s)
    for (int a = 0; a < mdp.n_actions; ++a)
      r_pi[s] += policy.prob(s, a) * mdp.mean_reward(s, a);
  for (int c = 0; c < n_classes; ++c)
    dec.class_gains[c] = kernels::dot(per_class.class_distributions[c].data(), r_pi.data(),
                                      static_cast<std::size_t>(S));

  // Absorption probabilities into each class from the start distribution.
  dec.class_weights.assign(static_cast<std::size_t>(n_classes), 0.0);
  std::vector<int> transient;
  for (int s = 0; s < S; ++s)
    if (dec.class_of_state[s] == -1) transient.push_back(s);
  const int nt = static_cast<int>(transient.size());
  std::vector<int> transient_idx(static_cast<std::size_t>(S), -1);
  for (int i = 0; i < nt; ++i) transient_idx[transient[i]] = i;

  std::vector<std::vector<double>> absorb(static_cast<std::size_t>(n_classes));
  if (nt > 0) {
    std::vector<double> q_mat(static_cast<std::size_t>(nt) * nt, 0.0);
    for (int i = 0; i < nt; ++i) {
      const double* row = chain.row(transient[i]);
      for (int j = 0; j < nt; ++j) q_mat[static_cast<std::size_t>(i) * nt + j] = -row[transient[j]];
      q_mat[static_cast<std::size_t>(i) * nt + i] += 1.0;
    }
    for (int c = 0; c < n_classes; ++c) {
      std::vector<double> rhs(static_cast<std::size_t>(nt), 0.0);
      for (int i = 0; i < nt; ++i) {
        const double* row = chain.row(transient[i]);
        for (int s = 0; s < S; ++s)
          if (dec.class_of_state[s] == c) rhs[i] += row[s];
      }
      absorb[c] = solve_dense(q_mat, std::move(rhs), nt);
    }
  }
  for (int s = 0; s < S; ++s) {
    const double p0 = mdp.initial_dist[s];
    if (p0 <= 0.0) continue;
    if (dec.class_of_state[s] >= 0) {
      dec.class_weights[dec.class_of_state[s]] += p0;
    } else {
      for (int c = 0; c < n_classes; ++c) dec.class_weights[c] += p0 * absorb[c][transient_idx[s]];
    }
  }
  int touched = 0;
  for (int c = 0; c < n_classes; ++c) {
    if (dec.class_weights[c] > 1e-12) ++touched;
    dec.start_weighted_gain += dec.class_weights[c] * dec.class_gains[c];
  }
  dec.ambiguous = touched > 1;
  return dec;
}

double average_reward_from_start(const TabularMdp& mdp, const Policy& policy) {
  return average_reward_decomposition(mdp, policy).start_weighted_gain;
}

ValueSolution policy_evaluation(const TabularMdp& mdp, const Policy& policy,
                                const Criterion& criterion) {
  policy.validate_for(mdp);
  switch (criterion.kind) {
    case Criterion::Kind::Episodic: {
      if (!mdp.setting.episodic) throw Error("NotEpisodic", "episodic evaluation on continuous MDP");
      return evaluate_episodic(mdp, policy);
    }
    case Criterion::Kind::Discounted:
      if (policy.time_indexed())
        throw Error("PolicyShapeMismatch", "discounted evaluation needs a stationary policy");
      return evaluate_discounted(mdp, policy, criterion.gamma);
    case Criterion::Kind::AverageReward: {
      if (policy.time_indexed())
        throw Error("PolicyShapeMismatch", "average-reward evaluation needs a stationary policy");
      const auto dec = average_reward_decomposition(mdp, policy);
      if (dec.ambiguous) {
        std::string gains;
        for (double g : dec.class_gains) gains += (gains.empty() ? "" : ", ") + std::to_string(g);
        throw Error("MultichainAmbiguity",
                    "start distribution reaches several recurrent classes; per-class gains: [" +
                        gains + "]");
      }
      ValueSolution sol;
      sol.criterion = Criterion::average_reward();
      sol.n_states = mdp.n_states;
      sol.n_actions = mdp.n_actions;
      sol.gain = dec.start_weighted_gain;
      sol.greedy = policy;
      // Bias for unichain policies: solve (I - T) h = r - rho anchored at the
      // first recurrent state.
      if (dec.class_gains.size() == 1) {
        const int S = mdp.n_states;
        const auto chain = induced_chain(mdp, policy);
        std::vector<double> a_mat(static_cast<std::size_t>(S) * S, 0.0);
        std::vector<double> b(static_cast<std::size_t>(S), 0.0);
        int anchor = 0;
        for (int s = 0; s < S; ++s)
          if (dec.class_of_state[s] == 0) {
            anchor = s;
            break;
          }
        for (int s = 0; s < S; ++s) {
          double r = 0.0;
          for (int a = 0; a < mdp.n_actions; ++a) r += policy.prob(s, a) * mdp.mean_reward(s, a);
          const double* row = chain.row(s);
          for (int t = 0; t < S; ++t) a_mat[static_cast<std::size_t>(s) * S + t] = -row[t];
          a_mat[static_cast<std::size_t>(s) * S + s] += 1.0;
          b[s] = r - sol.gain;
        }
        for (int t = 0; t < S; ++t) a_mat[static_cast<std::size_t>(anchor) * S + t] = 0.0;
        a_mat[static_cast<std::size_t>(anchor) * S + anchor] = 1.0;
        b[anchor] = 0.0;
        sol.bias = solve_dense(std::move(a_mat), std::move(b), S);
        sol.v = sol.bias;
      }
      return sol;
    }
  }
  throw Error("InvalidCriterion", "unknown criterion");
}

TabularMdp negate_rewards(const TabularMdp& mdp) {
  TabularMdp out = mdp;
  out.r_min = -mdp.r_max;
  out.r_max = -mdp.r_min;
  for (auto& r : out.reward) r = RewardDist::deterministic(-r.mean(), out.r_min, out.r_max);
  return out;
}

}  // namespace mdph
