// Copyright 2026 The Authors.
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

// Greedy selection of immunization groups.
//
// Each iteration scores every candidate group by the estimated marginal gain
// pi(S_i + V_j) - pi(S_i) and keeps the argmax (ties go to the smallest group
// id). The objective is neither submodular nor supermodular, so there is no
// lazy evaluation: every candidate is rescored every iteration.

#ifndef NETIMMUNE_IMMUNIZE_HPP_
#define NETIMMUNE_IMMUNIZE_HPP_

#include <algorithm>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "netimmune/bounds.hpp"
#include "netimmune/cascade.hpp"
#include "netimmune/core.hpp"
#include "netimmune/graph.hpp"
#include "netimmune/groups.hpp"

namespace netimmune {

struct GainEstimate {
  double gain = 0.0;
  double std_error = 0.0;
};

struct SelectionStep {
  GroupId group = 0;
  std::uint64_t multiplicity = 1;  // multiplicity of `group` after this step
  GainEstimate gain;
  bool forced = false;             // part of a high-effective-degree prefix
};

struct Selection {
  std::vector<SelectionStep> steps;
  Multiplicities multiplicities;
  std::size_t budget = 0;
  std::size_t forced_prefix = 0;
  EstimateResult value;  // estimated pi of the final selection

  std::vector<GroupId> chosen() const {
    std::vector<GroupId> ids;
    for (const auto& s : steps) ids.push_back(s.group);
    return ids;
  }
};

inline constexpr std::uint64_t kIterationStream = 0x17e2;

// Master seed of greedy iteration i; iteration `budget` scores the final set.
inline std::uint64_t iteration_seed(std::uint64_t master_seed,
                                    std::size_t iteration) {
  return derive_seed(master_seed, iteration, kIterationStream);
}

// Scores candidates by Monte Carlo with common random numbers: within one
// iteration every candidate sees the same live-edge samples and the same
// acceptance draws for the already selected groups.
class MonteCarloObjective {
 public:
  MonteCarloObjective(const ProbGraph& g, CascadeModel model,
                      std::span<const Group> groups, EstimatorConfig cfg)
      : g_(g),
        model_(std::move(model)),
        groups_(groups.begin(), groups.end()),
        by_id_(index_groups(groups_, g.num_nodes())),
        cfg_(cfg) {
    model_.validate(g_);
    if (cfg_.replicates == 0) {
      throw Error(ErrorKind::kConfig, "replicate count must be at least 1");
    }
  }

  std::vector<GainEstimate> marginal_gains(const Multiplicities& current,
                                           std::span<const GroupId> candidates,
                                           std::size_t iteration) const {
    const std::uint64_t seed = iteration_seed(cfg_.master_seed, iteration);
    std::vector<const Group*> cand;
    for (GroupId id : candidates) {
      auto it = by_id_.find(id);
      if (it == by_id_.end()) {
        throw Error(ErrorKind::kConfig,
                    "unknown group id " + std::to_string(id));
      }
      cand.push_back(it->second);
    }
    const std::size_t m = cand.size();
    const std::size_t chunks =
        (cfg_.replicates + kReplicateChunk - 1) / kReplicateChunk;
    std::vector<std::vector<Moments>> partial(chunks);

    for_each_chunk(
        cfg_.replicates, kReplicateChunk, cfg_.threads,
        [&](std::size_t begin, std::size_t end, std::size_t chunk) {
          ReplicateContext ctx(g_);
          ReachSearch trial(g_);
          std::vector<NodeId> extra;
          std::vector<Moments> acc(m);
          for (std::size_t r = begin; r < end; ++r) {
            sample_live_edges_into(g_, model_, r, seed, ctx.sample);
            std::fill(ctx.removed.begin(), ctx.removed.end(), 0);
            realize_selection(by_id_, current, r, seed, ctx.removed);
            ctx.cut.run(ctx.sample, ctx.removed);
            for (std::size_t j = 0; j < m; ++j) {
              const Group& grp = *cand[j];
              auto held = current.find(grp.id);
              const std::uint64_t instance =
                  (held == current.end() ? 0 : held->second) + 1;
              extra.clear();
              bool touches = false;
              realize_instance(grp, instance, r, seed, [&](NodeId u) {
                if (ctx.removed[u]) return;
                extra.push_back(u);
                touches = touches || ctx.cut.contains(u);
              });
              double gain = 0.0;
              if (touches) {
                for (NodeId u : extra) ctx.removed[u] = 1;
                trial.run(ctx.sample, ctx.removed);
                for (NodeId u : extra) ctx.removed[u] = 0;
                for (NodeId t : ctx.cut.visited()) {
                  if (!trial.contains(t)) gain += g_.utility(t);
                }
              }
              acc[j].add(gain);
            }
          }
          partial[chunk] = std::move(acc);
        });

    std::vector<GainEstimate> out(m);
    for (std::size_t j = 0; j < m; ++j) {
      Moments total;
      for (const auto& p : partial) total.merge(p[j]);
      out[j] = {total.mean(), total.stderr_of_mean()};
    }
    return out;
  }

  EstimateResult value(const Multiplicities& chosen,
                       std::size_t iteration) const {
    EstimatorConfig cfg = cfg_;
    cfg.master_seed = iteration_seed(cfg_.master_seed, iteration);
    return estimate_pi(g_, model_, groups_, chosen, cfg);
  }

 private:
  const ProbGraph& g_;
  CascadeModel model_;
  std::vector<Group> groups_;
  std::map<GroupId, const Group*> by_id_;
  EstimatorConfig cfg_;
};

// Runs `budget` greedy iterations against any objective exposing
// marginal_gains(current, candidates, iteration) and value(current,
// iteration). The first forced.size() iterations take the forced groups in
// order.
template <typename Objective>
Selection greedy_select(std::span<const Group> groups, std::size_t budget,
                        const Objective& objective, bool allow_multiset,
                        std::span<const GroupId> forced = {}) {
  if (budget < 1) throw Error(ErrorKind::kBudget, "k must be at least 1");
  if (groups.empty()) throw Error(ErrorKind::kBudget, "no candidate groups");
  if (!allow_multiset && budget > groups.size()) {
    throw Error(ErrorKind::kBudget,
                "k = " + std::to_string(budget) + " exceeds the " +
                    std::to_string(groups.size()) + " candidate groups");
  }
  if (forced.size() > budget) {
    throw Error(ErrorKind::kBudget, "forced prefix longer than the budget");
  }
  std::vector<GroupId> ids;
  for (const Group& g : groups) ids.push_back(g.id);
  std::sort(ids.begin(), ids.end());

  Selection sel;
  sel.budget = budget;
  sel.forced_prefix = forced.size();
  std::vector<GroupId> candidates;
  for (std::size_t it = 0; it < budget; ++it) {
    const bool is_forced = it < forced.size();
    candidates.clear();
    if (is_forced) {
      candidates.push_back(forced[it]);
    } else {
      for (GroupId id : ids) {
        if (allow_multiset || !sel.multiplicities.contains(id)) {
          candidates.push_back(id);
        }
      }
    }
    const auto gains =
        objective.marginal_gains(sel.multiplicities, candidates, it);
    std::size_t best = 0;
    for (std::size_t j = 1; j < candidates.size(); ++j) {
      if (gains[j].gain > gains[best].gain) best = j;
    }
    const GroupId pick = candidates[best];
    const std::uint64_t l = ++sel.multiplicities[pick];
    sel.steps.push_back({pick, l, gains[best], is_forced});
  }
  sel.value = objective.value(sel.multiplicities, budget);
  return sel;
}

// Replicates used when the caller leaves EstimatorConfig::replicates at 0:
// additive error 2% of the total utility with confidence 0.95.
inline std::size_t default_replicates(const ProbGraph& g, std::size_t k,
                                      std::size_t candidates) {
  const double total = g.total_utility();
  if (total <= 0.0) return 1;
  return recommended_replicates(total, k, candidates, 0.02 * total, 0.05);
}

// Greedy group immunization with Monte Carlo scoring.
inline Selection greedy(const ProbGraph& g, std::span<const Group> groups,
                        std::size_t k, const CascadeModel& model,
                        EstimatorConfig cfg, bool allow_multiset) {
  if (cfg.replicates == 0) {
    cfg.replicates = default_replicates(g, k, groups.size());
  }
  MonteCarloObjective objective(g, model, groups, cfg);
  return greedy_select(groups, k, objective, allow_multiset);
}

// Node immunization: one deterministic singleton group per non-seed node.
inline Selection greedy_nodes(const ProbGraph& g, std::size_t k,
                              const CascadeModel& model,
                              const EstimatorConfig& cfg) {
  const auto groups = singleton_groups(g.non_seed_nodes());
  return greedy(g, groups, k, model, cfg, /*allow_multiset=*/false);
}

enum class PrefixMode {
  kPrefix,      // k total: n_s forced nodes, then k - n_s greedy picks
  kBicriteria,  // k + n_s total: n_s forced nodes, then k greedy picks
};

// Non-seed nodes whose effective degree exceeds lambda_prime, by decreasing
// effective degree then id.
inline std::vector<NodeId> high_degree_nodes(const ProbGraph& g,
                                             const CascadeModel& model,
                                             double lambda_prime) {
  const auto profile = effective_degree_profile(g, model);
  std::vector<std::pair<double, NodeId>> high;
  for (std::size_t i = 0; i < profile.nodes.size(); ++i) {
    if (profile.lambda[i] > lambda_prime) {
      high.emplace_back(profile.lambda[i], profile.nodes[i]);
    }
  }
  std::sort(high.begin(), high.end(), [](const auto& a, const auto& b) {
    return a.first != b.first ? a.first > b.first : a.second < b.second;
  });
  std::vector<NodeId> nodes;
  for (const auto& [l, u] : high) nodes.push_back(u);
  return nodes;
}

template <typename Objective>
Selection prefix_greedy_select(const ProbGraph& g, std::size_t k,
                               double lambda_prime, const CascadeModel& model,
                               const Objective& objective, PrefixMode mode) {
  if (k < 1) throw Error(ErrorKind::kBudget, "k must be at least 1");
  const auto high = high_degree_nodes(g, model, lambda_prime);
  const std::size_t n_s = high.size();
  if (mode == PrefixMode::kPrefix && n_s >= k) {
    throw Error(ErrorKind::kThreshold,
                "threshold leaves n_s = " + std::to_string(n_s) +
                    " nodes above lambda', need n_s < k = " +
                    std::to_string(k));
  }
  const std::size_t total = mode == PrefixMode::kPrefix ? k : k + n_s;
  const auto groups = singleton_groups(g.non_seed_nodes());
  return greedy_select(std::span<const Group>(groups), total, objective,
                       /*allow_multiset=*/false, std::span<const GroupId>(high));
}

// Forces the nodes with effective degree above lambda_prime, then runs greedy
// for the rest of the budget.
inline Selection prefix_greedy(const ProbGraph& g, std::size_t k,
                               double lambda_prime, const CascadeModel& model,
                               EstimatorConfig cfg,
                               PrefixMode mode = PrefixMode::kPrefix) {
  const auto groups = singleton_groups(g.non_seed_nodes());
  if (cfg.replicates == 0) {
    cfg.replicates = default_replicates(g, k, groups.size());
  }
  MonteCarloObjective objective(g, model, groups, cfg);
  return prefix_greedy_select(g, k, lambda_prime, model, objective, mode);
}

}  // namespace netimmune

#endif  // NETIMMUNE_IMMUNIZE_HPP_
