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

#include "mdph/hardness.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>

#include "mdph/kernels.hpp"
#include "mdph/linalg.hpp"
#include "mdph/parallel.hpp"

namespace mdph {

// ---------------------------------------------------------------------------
// Diameter
// ---------------------------------------------------------------------------

namespace {

struct SparseKernel {
  // Per (s,a): compacted nonzero (next state, probability) pairs.
  std::vector<std::vector<std::pair<int, double>>> rows;
  int n_states = 0;
  int n_actions = 0;

  explicit SparseKernel(const TabularMdp& mdp)
      : rows(static_cast<std::size_t>(mdp.n_states) * mdp.n_actions),
        n_states(mdp.n_states),
        n_actions(mdp.n_actions) {
    for (int s = 0; s < mdp.n_states; ++s)
      for (int a = 0; a < mdp.n_actions; ++a) {
        auto& row = rows[static_cast<std::size_t>(s) * mdp.n_actions + a];
        const double* p = mdp.row(s, a);
        for (int t = 0; t < mdp.n_states; ++t)
          if (p[t] > 0.0) row.emplace_back(t, p[t]);
      }
  }
  const std::vector<std::pair<int, double>>& row(int s, int a) const {
    return rows[static_cast<std::size_t>(s) * n_actions + a];
  }
};

struct TargetSolution {
  std::vector<double> times;   // +inf where the target is not a.s. reachable
  std::vector<int> actions;    // minimizing action per source (-1 at target)
};

/// Optimal expected arrival times to `target` (Gauss-Seidel value iteration
/// over the almost-surely-reaching states, ordered by distance from the
/// target so deterministic kernels converge in one sweep).
TargetSolution solve_arrival_times(const TabularMdp& mdp, const SparseKernel& kernel, int target) {
  const int S = mdp.n_states;
  const int A = mdp.n_actions;
  const auto in_set = almost_sure_reach_set(mdp, target);

  TargetSolution out;
  out.times.assign(static_cast<std::size_t>(S), kInf);
  out.actions.assign(static_cast<std::size_t>(S), -1);
  out.times[target] = 0.0;

  // Allowed actions keep all their support inside the almost-sure set.
  std::vector<char> allowed(static_cast<std::size_t>(S) * A, 0);
  for (int s = 0; s < S; ++s) {
    if (!in_set[s] || s == target) continue;
    for (int a = 0; a < A; ++a) {
      bool ok = true;
      for (const auto& [t, p] : kernel.row(s, a))
        if (!in_set[t]) {
          ok = false;
          break;
        }
      allowed[static_cast<std::size_t>(s) * A + a] = ok;
    }
  }

  // Order states by BFS distance to the target over reversed support edges.
  std::vector<std::vector<int>> rev(static_cast<std::size_t>(S));
  for (int s = 0; s < S; ++s)
    for (int a = 0; a < A; ++a)
      if (s == target || allowed[static_cast<std::size_t>(s) * A + a])
        for (const auto& [t, p] : kernel.row(s, a)) rev[t].push_back(s);
  std::vector<int> order;
  order.reserve(static_cast<std::size_t>(S));
  {
    std::vector<char> seen(static_cast<std::size_t>(S), 0);
    seen[target] = 1;
    std::vector<int> frontier{target};
    while (!frontier.empty()) {
      std::vector<int> next;
      for (int v : frontier)
        for (int u : rev[v])
          if (!seen[u]) {
            seen[u] = 1;
            order.push_back(u);
            next.push_back(u);
          }
      frontier.swap(next);
    }
  }

  std::vector<double> t_val(static_cast<std::size_t>(S), 0.0);
  constexpr long kMaxSweeps = 2000000;
  for (long sweep = 0; sweep < kMaxSweeps; ++sweep) {
    double delta = 0.0, current_max = 0.0;
    for (int s : order) {
      if (!in_set[s]) continue;
      double best = kInf;
      int best_a = -1;
      for (int a = 0; a < A; ++a) {
        if (!allowed[static_cast<std::size_t>(s) * A + a]) continue;
        double acc = 1.0;
        for (const auto& [t, p] : kernel.row(s, a))
          if (t != target) acc += p * t_val[t];
        if (acc < best) {
          best = acc;
          best_a = a;
        }
      }
      delta = std::max(delta, std::fabs(best - t_val[s]));
      t_val[s] = best;
      out.actions[s] = best_a;
      current_max = std::max(current_max, best);
    }
    if (delta <= 1e-12 * std::max(1.0, current_max)) break;
    if (sweep == kMaxSweeps - 1)
      throw Error("NoConvergence", "arrival-time iteration did not stabilize");
  }
  for (int s = 0; s < S; ++s)
    if (in_set[s]) out.times[s] = t_val[s];
  out.times[target] = 0.0;
  return out;
}

/// Continuous-MDP diameter core. `sources` limits the max to a subset (used
/// by the episodic reachable-state restriction, where it equals all states).
DiameterDetail diameter_continuous(const TabularMdp& mdp, int jobs) {
  const int S = mdp.n_states;
  DiameterDetail detail;
  if (S <= 1) return detail;
  const SparseKernel kernel(mdp);

  std::vector<double> per_target_max(static_cast<std::size_t>(S), 0.0);
  std::vector<int> per_target_argsrc(static_cast<std::size_t>(S), -1);
  parallel_for(
      S,
      [&](int e) {
        const auto sol = solve_arrival_times(mdp, kernel, e);
        double m = 0.0;
        int arg = -1;
        for (int s = 0; s < S; ++s) {
          if (s == e) continue;
          if (sol.times[s] > m) {
            m = sol.times[s];
            arg = s;
          }
        }
        per_target_max[e] = m;
        per_target_argsrc[e] = arg;
      },
      jobs);

  for (int e = 0; e < S; ++e)
    if (per_target_max[e] > detail.value) {
      detail.value = per_target_max[e];
      detail.argmax_target = e;
      detail.argmax_source = per_target_argsrc[e];
    }
  if (detail.argmax_target >= 0) {
    const auto sol = solve_arrival_times(mdp, kernel, detail.argmax_target);
    detail.times_to_argmax_target = sol.times;
    detail.policy_to_argmax_target = sol.actions;
  }
  return detail;
}

}  // namespace

DiameterDetail diameter_detail(const TabularMdp& mdp, int jobs) {
  if (!mdp.setting.episodic) return diameter_continuous(mdp, jobs);
  const TabularMdp aug = episodic_augment(mdp);
  return diameter_continuous(restrict_states(aug, reachable_states(aug)), jobs);
}

double diameter(const TabularMdp& mdp, int jobs) { return diameter_detail(mdp, jobs).value; }

// ---------------------------------------------------------------------------
// Environmental value norm
// ---------------------------------------------------------------------------

double environmental_value_norm(const TabularMdp& mdp, const std::optional<Policy>& policy,
                                std::optional<double> gamma) {
  const int S = mdp.n_states;
  const int A = mdp.n_actions;
  if (mdp.setting.episodic) {
    const int H = mdp.setting.horizon;
    ValueSolution sol = policy.has_value()
                            ? policy_evaluation(mdp, *policy, Criterion::episodic())
                            : backward_induction(mdp);
    double worst = 0.0;
    for (int h = 0; h < H; ++h) {
      // On the time-augmented representation the episode boundary resamples
      // the next episode's start from P0, so h = H-1 rows spread over V_0.
      const double* v_next = h + 1 < H ? &sol.v[static_cast<std::size_t>(h + 1) * S] : sol.v.data();
      const double boundary_var =
          h + 1 < H ? -1.0
                    : kernels::weighted_variance(mdp.initial_dist.data(), v_next,
                                                 static_cast<std::size_t>(S));
      for (int s = 0; s < S; ++s)
        for (int a = 0; a < A; ++a) {
          const double var_v =
              h + 1 < H
                  ? kernels::weighted_variance(mdp.row(s, a), v_next, static_cast<std::size_t>(S))
                  : boundary_var;
          worst = std::max(worst, mdp.reward_at(s, a).variance() + var_v);
        }
    }
    return worst;
  }
  const double g = gamma.value_or(kValueNormGamma);
  if (g <= 0.0 || g >= 1.0)
    throw Error("ParamOutOfRange", "gamma must be in (0,1), got " + std::to_string(g));
  ValueSolution sol = policy.has_value()
                          ? policy_evaluation(mdp, *policy, Criterion::discounted(g))
                          : value_iteration_discounted(mdp, g);
  double worst = 0.0;
  for (int s = 0; s < S; ++s)
    for (int a = 0; a < A; ++a)
      worst = std::max(worst, kernels::weighted_variance(mdp.row(s, a), sol.v.data(),
                                                         static_cast<std::size_t>(S)));
  return std::sqrt(worst);
}

// ---------------------------------------------------------------------------
// Sub-optimality gaps
// ---------------------------------------------------------------------------

GapResult gap_reciprocal_sum(const TabularMdp& mdp, const Criterion& criterion) {
  const ValueSolution sol = optimal_solution(mdp, criterion);
  GapResult result;
  result.gaps.assign(sol.q.size(), 0.0);
  const int S = mdp.n_states;
  const int A = mdp.n_actions;
  const int slices = criterion.kind == Criterion::Kind::Episodic ? mdp.setting.horizon : 1;
  for (int h = 0; h < slices; ++h)
    for (int s = 0; s < S; ++s) {
      // V*(s) = max_a Q*(s,a); for average reward this holds on the bias Q.
      double vstar = -kInf;
      for (int a = 0; a < A; ++a)
        vstar = std::max(vstar, sol.q[(static_cast<std::size_t>(h) * S + s) * A + a]);
      for (int a = 0; a < A; ++a) {
        const std::size_t idx = (static_cast<std::size_t>(h) * S + s) * A + a;
        const double gap = vstar - sol.q[idx];
        result.gaps[idx] = gap;
        if (gap > result.gap_floor) result.reciprocal_sum += 1.0 / gap;
      }
    }
  return result;
}

// ---------------------------------------------------------------------------
// Stationary distributions
// ---------------------------------------------------------------------------

namespace {

std::vector<double> stationary_on_class(const MarkovChain& chain, const std::vector<int>& members) {
  const int m = static_cast<int>(members.size());
  std::vector<int> index(static_cast<std::size_t>(chain.n_states), -1);
  for (int i = 0; i < m; ++i) index[members[i]] = i;
  // Solve mu (T - I) = 0 with sum(mu) = 1: rows are (T^t - I), last replaced
  // by the normalization constraint.
  std::vector<double> a_mat(static_cast<std::size_t>(m) * m, 0.0);
  std::vector<double> b(static_cast<std::size_t>(m), 0.0);
  for (int i = 0; i < m; ++i) {
    const double* row = chain.row(members[i]);
    for (int j = 0; j < m; ++j) a_mat[static_cast<std::size_t>(j) * m + i] = row[members[j]];
    a_mat[static_cast<std::size_t>(i) * m + i] -= 1.0;
  }
  for (int j = 0; j < m; ++j) a_mat[static_cast<std::size_t>(m - 1) * m + j] = 1.0;
  b[m - 1] = 1.0;
  std::vector<double> mu = solve_dense(std::move(a_mat), std::move(b), m);

  std::vector<double> full(static_cast<std::size_t>(chain.n_states), 0.0);
  for (int i = 0; i < m; ++i) full[members[i]] = std::max(mu[i], 0.0);
  const double total = kernels::sum(full.data(), full.size());
  for (auto& x : full) x /= total;

  // Polish with power steps if the LU residual is not yet at 1e-10.
  auto residual = [&](const std::vector<double>& v) {
    double worst = 0.0;
    for (int j : members) {
      double acc = 0.0;
      for (int i : members) acc += v[i] * chain.row(i)[j];
      worst = std::max(worst, std::fabs(acc - v[j]));
    }
    return worst;
  };
  double best_res = residual(full);
  std::vector<double> candidate = full;
  for (int step = 0; step < 64 && best_res > 1e-12; ++step) {
    std::vector<double> next(full.size(), 0.0);
    for (int i : members)
      kernels::axpy(next.data(), candidate[i], chain.row(i), next.size());
    const double total2 = kernels::sum(next.data(), next.size());
    for (auto& x : next) x /= total2;
    candidate.swap(next);
    const double res = residual(candidate);
    if (res < best_res) {
      best_res = res;
      full = candidate;
    }
  }
  return full;
}

}  // namespace

StationaryPerClass stationary_distributions_per_class(const MarkovChain& chain) {
  const int n = chain.n_states;
  std::vector<std::vector<int>> adj(static_cast<std::size_t>(n));
  for (int s = 0; s < n; ++s)
    for (int t = 0; t < n; ++t)
      if (chain.row(s)[t] > 0.0) adj[s].push_back(t);
  int n_comp = 0;
  const auto comp = strongly_connected_components(adj, &n_comp);
  std::vector<char> is_bottom(static_cast<std::size_t>(n_comp), 1);
  for (int s = 0; s < n; ++s)
    for (int t : adj[s])
      if (comp[s] != comp[t]) is_bottom[comp[s]] = 0;

  StationaryPerClass out;
  out.class_of_state.assign(static_cast<std::size_t>(n), -1);
  std::vector<int> class_id(static_cast<std::size_t>(n_comp), -1);
  for (int c = 0; c < n_comp; ++c)
    if (is_bottom[c]) {
      class_id[c] = static_cast<int>(out.class_distributions.size());
      std::vector<int> members;
      for (int s = 0; s < n; ++s)
        if (comp[s] == c) members.push_back(s);
      for (int s : members) out.class_of_state[s] = class_id[c];
      out.class_distributions.push_back(stationary_on_class(chain, members));
    }
  return out;
}

std::vector<double> stationary_distribution(const MarkovChain& chain) {
  if (chain.stationary_cache.has_value()) return *chain.stationary_cache;
  const auto per_class = stationary_distributions_per_class(chain);
  if (per_class.class_distributions.size() != 1)
    throw Error("MultichainAmbiguity",
                "chain has " + std::to_string(per_class.class_distributions.size()) +
                    " recurrent classes; use stationary_distributions_per_class");
  chain.stationary_cache = per_class.class_distributions[0];
  return per_class.class_distributions[0];
}

// ---------------------------------------------------------------------------
// Mixing time
// ---------------------------------------------------------------------------

namespace {

/// C = A * B for dense row-major square matrices.
std::vector<double> mat_mul(const std::vector<double>& a, const std::vector<double>& b, int n) {
  std::vector<double> c(static_cast<std::size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i) {
    double* out = &c[static_cast<std::size_t>(i) * n];
    const double* arow = &a[static_cast<std::size_t>(i) * n];
    for (int k = 0; k < n; ++k)
      if (arow[k] != 0.0)
        kernels::axpy(out, arow[k], &b[static_cast<std::size_t>(k) * n], static_cast<std::size_t>(n));
  }
  return c;
}

double worst_tv_to(const std::vector<double>& m, const std::vector<double>& mu, int n) {
  double worst = 0.0;
  for (int s = 0; s < n; ++s)
    worst = std::max(worst, kernels::tv_distance(&m[static_cast<std::size_t>(s) * n], mu.data(),
                                                 static_cast<std::size_t>(n)));
  return worst;
}

}  // namespace

int mixing_time(const MarkovChain& chain, double threshold, int n_max) {
  if (!chain_irreducible(chain) || chain_period(chain) != 1)
    throw Error("NotErgodicChain", "mixing time needs an irreducible aperiodic chain");
  const int n = chain.n_states;
  const auto mu = stationary_distribution(chain);

  // sup_s d_TV(p_s^k, mu) is non-increasing in k, so exponential search for a
  // bracket (repeated squaring) followed by binary search is exact.
  std::vector<std::vector<double>> powers;  // powers[j] = T^(2^j)
  powers.push_back(chain.transition);
  if (worst_tv_to(powers[0], mu, n) <= threshold) return 1;

  long hi = 1;
  while (true) {
    if (hi > n_max) throw Error("MixingCapExceeded", "not mixed after " + std::to_string(n_max) + " steps");
    const auto& last = powers.back();
    powers.push_back(mat_mul(last, last, n));
    hi *= 2;
    if (worst_tv_to(powers.back(), mu, n) <= threshold) break;
  }
  // Invariant: d(hi) <= threshold < d(hi/2).
  long lo = hi / 2;
  auto power_matrix = [&](long k) {
    std::vector<double> acc;
    for (std::size_t j = 0; j < powers.size(); ++j)
      if ((k >> j) & 1) acc = acc.empty() ? powers[j] : mat_mul(acc, powers[j], n);
    return acc;
  };
  while (hi - lo > 1) {
    const long mid = lo + (hi - lo) / 2;
    if (worst_tv_to(power_matrix(mid), mu, n) <= threshold)
      hi = mid;
    else
      lo = mid;
  }
  if (hi > n_max) throw Error("MixingCapExceeded", "not mixed after " + std::to_string(n_max) + " steps");
  return static_cast<int>(hi);
}

// ---------------------------------------------------------------------------
// Distribution mismatch / normalization
// ---------------------------------------------------------------------------

double distribution_mismatch_ratio(const std::vector<double>& optimal_stationary,
                                   const std::vector<double>& policy_stationary) {
  if (optimal_stationary.size() != policy_stationary.size())
    throw Error("InvalidShape", "stationary vectors differ in length");
  double total = 0.0;
  for (std::size_t s = 0; s < optimal_stationary.size(); ++s) {
    const double num = optimal_stationary[s];
    const double den = policy_stationary[s];
    if (den <= 0.0) {
      if (num > 0.0) return kInf;
      continue;  // 0/0 counts as 0
    }
    total += num / den;
  }
  return total;
}

double normalize_measure(double value, double min_value, double max_value) {
  if (!(max_value > min_value))
    throw Error("DegenerateRange", "max " + std::to_string(max_value) + " <= min " +
                                       std::to_string(min_value));
  const double x = (value - min_value) / (max_value - min_value);
  return std::clamp(x, 0.0, 1.0);
}

// ---------------------------------------------------------------------------
// analyze_hardness
// ---------------------------------------------------------------------------

HardnessReport analyze_hardness(const TabularMdp& mdp, bool with_chain_stats, int jobs) {
  HardnessReport report;
  report.comm_class = classify_communication(mdp);
  report.diameter = diameter(mdp, jobs);
  report.value_norm = environmental_value_norm(mdp);

  const bool episodic = mdp.setting.episodic;
  if (episodic) {
    report.gap_sum = gap_reciprocal_sum(mdp, Criterion::episodic()).reciprocal_sum;
  } else {
    // Average-reward gaps; fall back to the discounted proxy when relative
    // value iteration is not applicable (periodic or non-weakly-comm MDPs).
    try {
      report.gap_sum = gap_reciprocal_sum(mdp, Criterion::average_reward()).reciprocal_sum;
    } catch (const Error&) {
      report.gap_sum =
          gap_reciprocal_sum(mdp, Criterion::discounted(kValueNormGamma)).reciprocal_sum;
    }
  }

  if (with_chain_stats) {
    ChainStats stats;
    try {
      TabularMdp flat = episodic ? restrict_states(episodic_augment(mdp),
                                                   reachable_states(episodic_augment(mdp)))
                                 : mdp;
      ValueSolution sol;
      try {
        sol = relative_value_iteration(flat);
      } catch (const Error&) {
        sol = value_iteration_discounted(flat, kValueNormGamma);
      }
      const auto chain = induced_chain(flat, sol.greedy);
      try {
        stats.mixing_time = mixing_time(chain);
      } catch (const Error&) {
        stats.mixing_time = std::nullopt;
      }
      try {
        const auto mu_opt = stationary_distribution(chain);
        const auto uniform_chain =
            induced_chain(flat, Policy::stationary_uniform(flat.n_states, flat.n_actions));
        const auto mu_uniform = stationary_distribution(uniform_chain);
        stats.mismatch_ratio = distribution_mismatch_ratio(mu_opt, mu_uniform);
      } catch (const Error&) {
        stats.mismatch_ratio = std::nullopt;
      }
      report.chain_stats = stats;
    } catch (const Error&) {
      report.chain_stats = std::nullopt;
    }
  }
  return report;
}

}  // namespace mdph
