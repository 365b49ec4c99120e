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

#include "mdph/mdp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "mdph/kernels.hpp"

namespace mdph {

// ---------------------------------------------------------------------------
// RewardDist
// ---------------------------------------------------------------------------

RewardDist RewardDist::deterministic(double mean, double r_min, double r_max) {
  RewardDist d;
  d.kind = RewardKind::Deterministic;
  d.mean_value = mean;
  d.r_min = r_min;
  d.r_max = r_max;
  return d;
}

RewardDist RewardDist::scaled_beta(double mean, double variance_knob, double r_min, double r_max) {
  const double range = r_max - r_min;
  const double mu = range > 0.0 ? (mean - r_min) / range : 0.0;
  const double cap = mu * (1.0 - mu);
  if (cap <= 1e-12 || variance_knob <= 0.0) return deterministic(mean, r_min, r_max);
  const double v = std::min(variance_knob, 0.5 * cap);
  const double nu = cap / v - 1.0;  // alpha + beta
  RewardDist d;
  d.kind = RewardKind::ScaledBeta;
  d.alpha = mu * nu;
  d.beta = (1.0 - mu) * nu;
  d.r_min = r_min;
  d.r_max = r_max;
  d.mean_value = mean;
  return d;
}

double RewardDist::mean() const {
  if (kind == RewardKind::Deterministic) return mean_value;
  return r_min + (r_max - r_min) * alpha / (alpha + beta);
}

double RewardDist::variance() const {
  if (kind == RewardKind::Deterministic) return 0.0;
  const double range = r_max - r_min;
  const double ab = alpha + beta;
  return range * range * alpha * beta / (ab * ab * (ab + 1.0));
}

double RewardDist::sample(Rng& rng) const {
  if (kind == RewardKind::Deterministic) return mean_value;
  return r_min + (r_max - r_min) * rng.next_beta(alpha, beta);
}

// ---------------------------------------------------------------------------
// TabularMdp / Policy helpers
// ---------------------------------------------------------------------------

bool TabularMdp::deterministic_kernel() const {
  for (int s = 0; s < n_states; ++s)
    for (int a = 0; a < n_actions; ++a) {
      const double* r = row(s, a);
      for (int t = 0; t < n_states; ++t)
        if (r[t] != 0.0 && std::fabs(r[t] - 1.0) > kRowTol) return false;
    }
  return true;
}

Policy Policy::stationary_uniform(int n_states, int n_actions) {
  Policy p;
  p.n_states = n_states;
  p.n_actions = n_actions;
  p.probs.assign(static_cast<std::size_t>(n_states) * n_actions, 1.0 / n_actions);
  return p;
}

Policy Policy::stationary_deterministic(const std::vector<int>& actions, int n_actions) {
  Policy p;
  p.n_states = static_cast<int>(actions.size());
  p.n_actions = n_actions;
  p.probs.assign(static_cast<std::size_t>(p.n_states) * n_actions, 0.0);
  for (int s = 0; s < p.n_states; ++s)
    p.probs[static_cast<std::size_t>(s) * n_actions + actions[s]] = 1.0;
  return p;
}

Policy Policy::time_indexed_deterministic(const std::vector<std::vector<int>>& actions,
                                          int n_actions) {
  Policy p;
  p.horizon = static_cast<int>(actions.size());
  p.n_states = static_cast<int>(actions[0].size());
  p.n_actions = n_actions;
  p.probs.assign(static_cast<std::size_t>(p.horizon) * p.n_states * n_actions, 0.0);
  for (int h = 0; h < p.horizon; ++h)
    for (int s = 0; s < p.n_states; ++s)
      p.probs[(static_cast<std::size_t>(h) * p.n_states + s) * n_actions + actions[h][s]] = 1.0;
  return p;
}

void Policy::validate_for(const TabularMdp& mdp) const {
  if (n_states != mdp.n_states || n_actions != mdp.n_actions)
    throw Error("PolicyShapeMismatch", "policy is " + std::to_string(n_states) + "x" +
                                           std::to_string(n_actions) + ", MDP is " +
                                           std::to_string(mdp.n_states) + "x" +
                                           std::to_string(mdp.n_actions));
  if (time_indexed() && !mdp.setting.episodic)
    throw Error("PolicyShapeMismatch", "time-indexed policy on a continuous MDP");
  if (time_indexed() && horizon != mdp.setting.horizon)
    throw Error("PolicyShapeMismatch", "policy horizon != MDP horizon");
  const int slices = time_indexed() ? horizon : 1;
  for (int h = 0; h < slices; ++h)
    for (int s = 0; s < n_states; ++s) {
      const double* r = &probs[(static_cast<std::size_t>(h) * n_states + s) * n_actions];
      const double total = kernels::sum(r, static_cast<std::size_t>(n_actions));
      if (std::fabs(total - 1.0) > kRowTol)
        throw Error("PolicyShapeMismatch",
                    "policy row " + std::to_string(s) + " sums to " + std::to_string(total));
    }
}

int Policy::sample(int s, Rng& rng) const {
  return rng.next_categorical(std::span<const double>(row(s), static_cast<std::size_t>(n_actions)));
}

int Policy::sample(int h, int s, Rng& rng) const {
  if (!time_indexed()) return sample(s, rng);
  return rng.next_categorical(
      std::span<const double>(row(h, s), static_cast<std::size_t>(n_actions)));
}

// ---------------------------------------------------------------------------
// build_mdp
// ---------------------------------------------------------------------------

namespace {

void normalize_row_checked(double* r, int n, const std::string& where) {
  double total = kernels::sum(r, static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    if (r[i] < 0.0)
      throw Error("NonStochasticRow", where + " has negative entry " + std::to_string(r[i]));
  if (std::fabs(total - 1.0) > kRowTol)
    throw Error("NonStochasticRow", where + " sums to " + std::to_string(total));
  if (total != 1.0)
    for (int i = 0; i < n; ++i) r[i] /= total;
}

}  // namespace

TabularMdp build_mdp(int n_states, int n_actions, std::vector<double> transition,
                     std::vector<RewardDist> reward, std::vector<double> initial_dist,
                     Setting setting, double r_min, double r_max) {
  if (n_states < 1 || n_actions < 1)
    throw Error("InvalidShape", "need at least one state and one action");
  if (transition.size() != static_cast<std::size_t>(n_states) * n_actions * n_states)
    throw Error("InvalidShape", "transition tensor size mismatch");
  if (reward.size() != static_cast<std::size_t>(n_states) * n_actions)
    throw Error("InvalidShape", "reward table size mismatch");
  if (initial_dist.size() != static_cast<std::size_t>(n_states))
    throw Error("InvalidShape", "initial distribution size mismatch");
  if (setting.episodic && setting.horizon < 1)
    throw Error("InvalidHorizon", "episodic horizon must be >= 1, got " +
                                      std::to_string(setting.horizon));

  TabularMdp mdp;
  mdp.n_states = n_states;
  mdp.n_actions = n_actions;
  mdp.transition = std::move(transition);
  mdp.reward = std::move(reward);
  mdp.initial_dist = std::move(initial_dist);
  mdp.setting = setting;
  mdp.r_min = r_min;
  mdp.r_max = r_max;

  for (int s = 0; s < n_states; ++s)
    for (int a = 0; a < n_actions; ++a)
      normalize_row_checked(mdp.row(s, a), n_states,
                            "P(.|" + std::to_string(s) + "," + std::to_string(a) + ")");
  normalize_row_checked(mdp.initial_dist.data(), n_states, "P0");

  for (int s = 0; s < n_states; ++s)
    for (int a = 0; a < n_actions; ++a) {
      const double m = mdp.mean_reward(s, a);
      if (m < r_min - 1e-12 || m > r_max + 1e-12)
        throw Error("RewardOutOfRange", "mean reward " + std::to_string(m) + " at (" +
                                            std::to_string(s) + "," + std::to_string(a) +
                                            ") outside [" + std::to_string(r_min) + "," +
                                            std::to_string(r_max) + "]");
    }
  return mdp;
}

// ---------------------------------------------------------------------------
// perturb_kernel
// ---------------------------------------------------------------------------

TabularMdp perturb_kernel(const TabularMdp& mdp, double p_rand, double p_lazy) {
  if (p_rand < 0.0 || p_rand >= 1.0)
    throw Error("ParamOutOfRange", "p_rand must be in [0,1), got " + std::to_string(p_rand));
  if (p_lazy < 0.0 || p_lazy >= 1.0)
    throw Error("ParamOutOfRange", "p_lazy must be in [0,1), got " + std::to_string(p_lazy));

  TabularMdp out = mdp;
  if (p_rand == 0.0 && p_lazy == 0.0) return out;

  const int S = mdp.n_states;
  const int A = mdp.n_actions;
  std::vector<double> action_mean(static_cast<std::size_t>(S));
  for (int s = 0; s < S; ++s) {
    // Random-action mix: P' = (1-r) P + (r/|A|) sum_b P(.|s,b).
    if (p_rand > 0.0) {
      std::fill(action_mean.begin(), action_mean.end(), 0.0);
      for (int a = 0; a < A; ++a)
        kernels::axpy(action_mean.data(), 1.0 / A, mdp.row(s, a), static_cast<std::size_t>(S));
      for (int a = 0; a < A; ++a)
        kernels::mix2(out.row(s, a), mdp.row(s, a), 1.0 - p_rand, action_mean.data(), p_rand,
                      static_cast<std::size_t>(S));
    }
    // Lazy mix: P'' = (1-l) P' + l * 1(s'=s).
    if (p_lazy > 0.0) {
      for (int a = 0; a < A; ++a) {
        double* r = out.row(s, a);
        for (int t = 0; t < S; ++t) r[t] *= 1.0 - p_lazy;
        r[s] += p_lazy;
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// episodic_augment
// ---------------------------------------------------------------------------

TabularMdp episodic_augment(const TabularMdp& mdp) {
  if (!mdp.setting.episodic) throw Error("NotEpisodic", "episodic_augment needs an episodic MDP");
  const int S = mdp.n_states;
  const int A = mdp.n_actions;
  const int H = mdp.setting.horizon;
  const int N = S * H;

  TabularMdp out;
  out.n_states = N;
  out.n_actions = A;
  out.transition.assign(static_cast<std::size_t>(N) * A * N, 0.0);
  out.reward.resize(static_cast<std::size_t>(N) * A);
  out.initial_dist.assign(static_cast<std::size_t>(N), 0.0);
  out.setting = Setting::continuous();
  out.r_min = mdp.r_min;
  out.r_max = mdp.r_max;
  out.metadata = mdp.metadata;
  out.metadata["augmented_from_horizon"] = std::to_string(H);

  for (int h = 0; h < H; ++h)
    for (int s = 0; s < S; ++s) {
      const int u = augmented_index(s, h, S);
      for (int a = 0; a < A; ++a) {
        out.reward_at(u, a) = mdp.reward_at(s, a);
        double* r = out.row(u, a);
        if (h + 1 < H) {
          const double* p = mdp.row(s, a);
          for (int t = 0; t < S; ++t) r[augmented_index(t, h + 1, S)] = p[t];
        } else {
          // Episode boundary: the next state resamples from P0 at h = 0.
          for (int t = 0; t < S; ++t) r[augmented_index(t, 0, S)] = mdp.initial_dist[t];
        }
      }
    }
  for (int t = 0; t < S; ++t) out.initial_dist[augmented_index(t, 0, S)] = mdp.initial_dist[t];
  return out;
}

// ---------------------------------------------------------------------------
// induced_chain
// ---------------------------------------------------------------------------

MarkovChain induced_chain(const TabularMdp& mdp, const Policy& policy) {
  policy.validate_for(mdp);
  if (policy.time_indexed())
    throw Error("PolicyShapeMismatch", "induced_chain needs a stationary policy; augment first");
  const int S = mdp.n_states;
  MarkovChain chain;
  chain.n_states = S;
  chain.transition.assign(static_cast<std::size_t>(S) * S, 0.0);
  for (int s = 0; s < S; ++s) {
    double* out = chain.row(s);
    for (int a = 0; a < mdp.n_actions; ++a) {
      const double w = policy.prob(s, a);
      if (w == 0.0) continue;
      if (w == 1.0) {
        const double* p = mdp.row(s, a);
        std::copy(p, p + S, out);
        break;
      }
      kernels::axpy(out, w, mdp.row(s, a), static_cast<std::size_t>(S));
    }
  }
  return chain;
}

// ---------------------------------------------------------------------------
// Graph utilities
// ---------------------------------------------------------------------------

std::vector<std::vector<int>> support_graph(const TabularMdp& mdp) {
  std::vector<std::vector<int>> adj(static_cast<std::size_t>(mdp.n_states));
  for (int s = 0; s < mdp.n_states; ++s) {
    std::vector<char> seen(static_cast<std::size_t>(mdp.n_states), 0);
    for (int a = 0; a < mdp.n_actions; ++a) {
      const double* r = mdp.row(s, a);
      for (int t = 0; t < mdp.n_states; ++t)
        if (r[t] > 0.0) seen[t] = 1;
    }
    for (int t = 0; t < mdp.n_states; ++t)
      if (seen[t]) adj[s].push_back(t);
  }
  return adj;
}

std::vector<int> strongly_connected_components(const std::vector<std::vector<int>>& adj,
                                               int* n_components) {
  // Iterative Tarjan.
  const int n = static_cast<int>(adj.size());
  std::vector<int> comp(n, -1), low(n, 0), disc(n, -1), stack_mem;
  std::vector<char> on_stack(n, 0);
  int timer = 0, n_comp = 0;
  stack_mem.reserve(n);

  struct Frame {
    int v;
    std::size_t edge;
  };
  std::vector<Frame> call;
  for (int root = 0; root < n; ++root) {
    if (disc[root] != -1) continue;
    call.push_back({root, 0});
    disc[root] = low[root] = timer++;
    stack_mem.push_back(root);
    on_stack[root] = 1;
    while (!call.empty()) {
      Frame& f = call.back();
      if (f.edge < adj[f.v].size()) {
        const int w = adj[f.v][f.edge++];
        if (disc[w] == -1) {
          disc[w] = low[w] = timer++;
          stack_mem.push_back(w);
          on_stack[w] = 1;
          call.push_back({w, 0});
        } else if (on_stack[w]) {
          low[f.v] = std::min(low[f.v], disc[w]);
        }
      } else {
        if (low[f.v] == disc[f.v]) {
          for (;;) {
            const int w = stack_mem.back();
            stack_mem.pop_back();
            on_stack[w] = 0;
            comp[w] = n_comp;
            if (w == f.v) break;
          }
          ++n_comp;
        }
        const int v = f.v;
        call.pop_back();
        if (!call.empty()) low[call.back().v] = std::min(low[call.back().v], low[v]);
      }
    }
  }
  if (n_components != nullptr) *n_components = n_comp;
  return comp;
}

std::vector<char> reachable_states(const TabularMdp& mdp) {
  const auto adj = support_graph(mdp);
  std::vector<char> seen(static_cast<std::size_t>(mdp.n_states), 0);
  std::vector<int> queue;
  for (int s = 0; s < mdp.n_states; ++s)
    if (mdp.initial_dist[s] > 0.0) {
      seen[s] = 1;
      queue.push_back(s);
    }
  while (!queue.empty()) {
    const int v = queue.back();
    queue.pop_back();
    for (int w : adj[v])
      if (!seen[w]) {
        seen[w] = 1;
        queue.push_back(w);
      }
  }
  return seen;
}

std::vector<char> almost_sure_reach_set(const TabularMdp& mdp, int target) {
  const int S = mdp.n_states;
  const int A = mdp.n_actions;
  std::vector<char> in_set(static_cast<std::size_t>(S), 1);
  // Alternate two prunes until fixpoint: (1) drop states with no action whose
  // support stays inside the candidate set, (2) drop states that cannot reach
  // the target through in-set actions.
  for (;;) {
    bool changed = false;
    for (;;) {
      bool inner = false;
      for (int s = 0; s < S; ++s) {
        if (!in_set[s] || s == target) continue;
        bool has_safe_action = false;
        for (int a = 0; a < A && !has_safe_action; ++a) {
          const double* r = mdp.row(s, a);
          bool safe = true;
          for (int t = 0; t < S; ++t)
            if (r[t] > 0.0 && !in_set[t]) {
              safe = false;
              break;
            }
          if (safe) has_safe_action = true;
        }
        if (!has_safe_action) {
          in_set[s] = 0;
          inner = changed = true;
        }
      }
      if (!inner) break;
    }
    // Backward reachability to the target over "safe" action supports.
    std::vector<char> reaches(static_cast<std::size_t>(S), 0);
    if (in_set[target]) reaches[target] = 1;
    bool grew = true;
    while (grew) {
      grew = false;
      for (int s = 0; s < S; ++s) {
        if (!in_set[s] || reaches[s]) continue;
        for (int a = 0; a < A && !reaches[s]; ++a) {
          const double* r = mdp.row(s, a);
          bool safe = true, touches = false;
          for (int t = 0; t < S; ++t) {
            if (r[t] <= 0.0) continue;
            if (!in_set[t]) {
              safe = false;
              break;
            }
            if (reaches[t]) touches = true;
          }
          if (safe && touches) {
            reaches[s] = 1;
            grew = true;
          }
        }
      }
    }
    for (int s = 0; s < S; ++s)
      if (in_set[s] && !reaches[s]) {
        in_set[s] = 0;
        changed = true;
      }
    if (!changed) break;
  }
  return in_set;
}

bool chain_irreducible(const MarkovChain& chain) {
  const int n = chain.n_states;
  std::vector<std::vector<int>> adj(static_cast<std::size_t>(n));
  for (int s = 0; s < n; ++s)
    for (int t = 0; t < n; ++t)
      if (chain.row(s)[t] > 0.0) adj[s].push_back(t);
  int n_comp = 0;
  strongly_connected_components(adj, &n_comp);
  return n_comp == 1;
}

int chain_period(const MarkovChain& chain) {
  if (!chain_irreducible(chain)) return 0;
  const int n = chain.n_states;
  // BFS levels from state 0; period = gcd over edges of (level(u)+1-level(v)).
  std::vector<int> level(static_cast<std::size_t>(n), -1);
  std::vector<int> queue{0};
  level[0] = 0;
  for (std::size_t qi = 0; qi < queue.size(); ++qi) {
    const int u = queue[qi];
    for (int v = 0; v < n; ++v)
      if (chain.row(u)[v] > 0.0 && level[v] == -1) {
        level[v] = level[u] + 1;
        queue.push_back(v);
      }
  }
  int g = 0;
  for (int u = 0; u < n; ++u)
    for (int v = 0; v < n; ++v)
      if (chain.row(u)[v] > 0.0) g = std::gcd(g, std::abs(level[u] + 1 - level[v]));
  return g == 0 ? 1 : g;
}

// ---------------------------------------------------------------------------
// classify_communication
// ---------------------------------------------------------------------------

TabularMdp restrict_states(const TabularMdp& mdp, const std::vector<char>& keep) {
  std::vector<int> remap(static_cast<std::size_t>(mdp.n_states), -1);
  int n = 0;
  for (int s = 0; s < mdp.n_states; ++s)
    if (keep[s]) remap[s] = n++;
  TabularMdp out;
  out.n_states = n;
  out.n_actions = mdp.n_actions;
  out.transition.assign(static_cast<std::size_t>(n) * mdp.n_actions * n, 0.0);
  out.reward.resize(static_cast<std::size_t>(n) * mdp.n_actions);
  out.initial_dist.assign(static_cast<std::size_t>(n), 0.0);
  out.setting = mdp.setting;
  out.r_min = mdp.r_min;
  out.r_max = mdp.r_max;
  for (int s = 0; s < mdp.n_states; ++s) {
    if (!keep[s]) continue;
    out.initial_dist[remap[s]] = mdp.initial_dist[s];
    for (int a = 0; a < mdp.n_actions; ++a) {
      out.reward_at(remap[s], a) = mdp.reward_at(s, a);
      const double* src = mdp.row(s, a);
      double* dst = out.row(remap[s], a);
      for (int t = 0; t < mdp.n_states; ++t)
        if (src[t] > 0.0 && keep[t]) dst[remap[t]] = src[t];
    }
  }
  return out;
}

namespace {

bool support_strongly_connected(const TabularMdp& mdp) {
  int n_comp = 0;
  strongly_connected_components(support_graph(mdp), &n_comp);
  return n_comp == 1;
}

/// All-policy irreducibility: for every target, the greatest fixpoint of
/// "keep s while some action's support stays inside" must empty out.
bool irreducible_for_all_policies(const TabularMdp& mdp) {
  const int S = mdp.n_states;
  const int A = mdp.n_actions;
  for (int target = 0; target < S; ++target) {
    std::vector<char> avoid(static_cast<std::size_t>(S), 1);
    avoid[target] = 0;
    bool shrunk = true;
    while (shrunk) {
      shrunk = false;
      for (int s = 0; s < S; ++s) {
        if (!avoid[s]) continue;
        bool can_stay = false;
        for (int a = 0; a < A && !can_stay; ++a) {
          const double* r = mdp.row(s, a);
          bool stays = true;
          for (int t = 0; t < S; ++t)
            if (r[t] > 0.0 && !avoid[t]) {
              stays = false;
              break;
            }
          if (stays) can_stay = true;
        }
        if (!can_stay) {
          avoid[s] = 0;
          shrunk = true;
        }
      }
    }
    for (int s = 0; s < S; ++s)
      if (avoid[s]) return false;
  }
  return true;
}

/// Exact certificate: a state whose every action keeps positive self-mass
/// gives every policy a self-loop, hence aperiodicity (given irreducibility).
bool has_universal_self_loop(const TabularMdp& mdp) {
  for (int s = 0; s < mdp.n_states; ++s) {
    bool all = true;
    for (int a = 0; a < mdp.n_actions; ++a)
      if (mdp.row(s, a)[s] <= 0.0) {
        all = false;
        break;
      }
    if (all) return true;
  }
  return false;
}

enum class AperiodicityResult { CertifiedExact, CertifiedHeuristic, Disproved };

/// All-policy aperiodicity. Enumerates every deterministic policy when there
/// are at most 64 of them; otherwise samples 64 at random (heuristic).
AperiodicityResult aperiodic_for_all_policies(const TabularMdp& mdp) {
  if (has_universal_self_loop(mdp)) return AperiodicityResult::CertifiedExact;
  const int S = mdp.n_states;
  const int A = mdp.n_actions;
  constexpr int kSamples = 64;

  double n_policies = 1.0;
  for (int s = 0; s < S && n_policies <= kSamples; ++s) n_policies *= A;
  const bool exhaustive = n_policies <= kSamples;

  std::vector<int> actions(static_cast<std::size_t>(S), 0);
  Rng rng(0x6D647068u);  // fixed key: classification must be deterministic
  const int count = exhaustive ? static_cast<int>(n_policies) : kSamples;
  for (int k = 0; k < count; ++k) {
    if (exhaustive) {
      int idx = k;
      for (int s = 0; s < S; ++s) {
        actions[s] = idx % A;
        idx /= A;
      }
    } else {
      for (int s = 0; s < S; ++s) actions[s] = static_cast<int>(rng.next_below(A));
    }
    const auto chain = induced_chain(mdp, Policy::stationary_deterministic(actions, A));
    if (chain_period(chain) != 1) return AperiodicityResult::Disproved;
  }
  return exhaustive ? AperiodicityResult::CertifiedExact : AperiodicityResult::CertifiedHeuristic;
}

CommunicationClass classify_continuous(const TabularMdp& mdp) {
  CommunicationClass result;
  if (support_strongly_connected(mdp)) {
    result.value = CommClass::Communicating;
    if (irreducible_for_all_policies(mdp)) {
      switch (aperiodic_for_all_policies(mdp)) {
        case AperiodicityResult::CertifiedExact:
          result.value = CommClass::Ergodic;
          result.certification = "exact";
          break;
        case AperiodicityResult::CertifiedHeuristic:
          result.value = CommClass::Ergodic;
          result.certification = "heuristic";
          break;
        case AperiodicityResult::Disproved:
          break;
      }
    }
    return result;
  }

  // Not communicating: find bottom SCCs of the support graph.
  const auto adj = support_graph(mdp);
  int n_comp = 0;
  const auto comp = strongly_connected_components(adj, &n_comp);
  std::vector<char> is_bottom(static_cast<std::size_t>(n_comp), 1);
  for (int s = 0; s < mdp.n_states; ++s)
    for (int t : adj[s])
      if (comp[s] != comp[t]) is_bottom[comp[s]] = 0;
  int n_bottom = 0, bottom_id = -1;
  for (int c = 0; c < n_comp; ++c)
    if (is_bottom[c]) {
      ++n_bottom;
      bottom_id = c;
    }
  if (n_bottom != 1) {
    result.value = CommClass::NonWeaklyCommunicating;
    return result;
  }

  // Trap check outside the bottom class: greatest fixpoint of "some action
  // keeps the support inside D". Nonempty remainder = a policy-closed trap.
  const int S = mdp.n_states;
  const int A = mdp.n_actions;
  std::vector<char> trap(static_cast<std::size_t>(S), 0);
  for (int s = 0; s < S; ++s) trap[s] = comp[s] != bottom_id;
  bool shrunk = true;
  while (shrunk) {
    shrunk = false;
    for (int s = 0; s < S; ++s) {
      if (!trap[s]) continue;
      bool can_stay = false;
      for (int a = 0; a < A && !can_stay; ++a) {
        const double* r = mdp.row(s, a);
        bool stays = true;
        for (int t = 0; t < S; ++t)
          if (r[t] > 0.0 && !trap[t]) {
            stays = false;
            break;
          }
        if (stays) can_stay = true;
      }
      if (!can_stay) {
        trap[s] = 0;
        shrunk = true;
      }
    }
  }
  for (int s = 0; s < S; ++s)
    if (trap[s]) {
      result.value = CommClass::NonWeaklyCommunicating;
      return result;
    }
  result.value = CommClass::WeaklyCommunicating;
  return result;
}

}  // namespace

CommunicationClass classify_communication(const TabularMdp& mdp) {
  if (!mdp.setting.episodic) return classify_continuous(mdp);
  const TabularMdp aug = episodic_augment(mdp);
  return classify_continuous(restrict_states(aug, reachable_states(aug)));
}

const char* to_string(CommClass c) {
  switch (c) {
    case CommClass::Ergodic:
      return "ergodic";
    case CommClass::Communicating:
      return "communicating";
    case CommClass::WeaklyCommunicating:
      return "weakly_communicating";
    case CommClass::NonWeaklyCommunicating:
      return "non_weakly_communicating";
  }
  return "unknown";
}

}  // namespace mdph
