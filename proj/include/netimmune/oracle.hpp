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

// Exact enumeration over all live-edge realizations of a tiny IC instance.
//
// Reachability here is computed on 64-bit node masks, independently of the
// breadth-first search in cascade.hpp, so the two can check each other.
// Arcs with probability 0 or 1 do not branch; only the remaining "random"
// arcs are enumerated (2^m realizations).

#ifndef NETIMMUNE_ORACLE_HPP_
#define NETIMMUNE_ORACLE_HPP_

#include <algorithm>
#include <bit>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "netimmune/bounds.hpp"
#include "netimmune/core.hpp"
#include "netimmune/graph.hpp"
#include "netimmune/groups.hpp"
#include "netimmune/immunize.hpp"

namespace netimmune {

using NodeBits = std::uint64_t;

struct OracleLimits {
  std::size_t max_random_arcs = 22;
  std::size_t max_subsets = 1'000'000;
};

struct ExactResult {
  double value = 0.0;
  std::uint64_t realizations = 0;
  double total_probability = 0.0;
};

inline NodeBits to_bits(std::span<const NodeId> nodes) {
  NodeBits bits = 0;
  for (NodeId u : nodes) {
    if (u >= 64) {
      throw Error(ErrorKind::kSizeCap, "oracle supports node ids below 64");
    }
    bits |= NodeBits{1} << u;
  }
  return bits;
}

inline std::vector<NodeId> from_bits(NodeBits bits) {
  std::vector<NodeId> nodes;
  while (bits) {
    nodes.push_back(static_cast<NodeId>(std::countr_zero(bits)));
    bits &= bits - 1;
  }
  return nodes;
}

// Walks all realizations of the random arcs, handing each one's probability
// and per-node live successor masks to a callback.
class RealizationEnumerator {
 public:
  RealizationEnumerator(const ProbGraph& g, const OracleLimits& limits = {})
      : g_(g) {
    if (g.num_nodes() > 64) {
      throw Error(ErrorKind::kSizeCap,
                  "oracle supports at most 64 nodes, graph has " +
                      std::to_string(g.num_nodes()));
    }
    fixed_.assign(g.num_nodes(), 0);
    for (const Arc& a : g.arcs()) {
      if (a.p >= 1.0) {
        fixed_[a.src] |= NodeBits{1} << a.dst;
      } else if (a.p > 0.0) {
        random_.push_back(a);
      }
    }
    if (random_.size() > limits.max_random_arcs) {
      throw Error(ErrorKind::kSizeCap,
                  "graph has m = " + std::to_string(random_.size()) +
                      " random arcs, oracle cap is " +
                      std::to_string(limits.max_random_arcs));
    }
    for (NodeId s : g.seeds()) seeds_ |= NodeBits{1} << s;
  }

  std::size_t random_arcs() const { return random_.size(); }
  std::uint64_t realizations() const {
    return std::uint64_t{1} << random_.size();
  }
  NodeBits seeds() const { return seeds_; }

  // fn(probability, std::span<const NodeBits> successors)
  template <typename Fn>
  void for_each(Fn&& fn) const {
    std::vector<NodeBits> succ(g_.num_nodes());
    const std::uint64_t total = realizations();
    for (std::uint64_t mask = 0; mask < total; ++mask) {
      std::copy(fixed_.begin(), fixed_.end(), succ.begin());
      double prob = 1.0;
      for (std::size_t i = 0; i < random_.size(); ++i) {
        const Arc& a = random_[i];
        if (mask >> i & 1) {
          prob *= a.p;
          succ[a.src] |= NodeBits{1} << a.dst;
        } else {
          prob *= 1.0 - a.p;
        }
      }
      fn(prob, std::span<const NodeBits>(succ));
    }
  }

  // Nodes reached from the non-removed seeds.
  NodeBits reach(std::span<const NodeBits> succ, NodeBits removed) const {
    NodeBits reached = seeds_ & ~removed;
    NodeBits frontier = reached;
    while (frontier) {
      const int u = std::countr_zero(frontier);
      frontier &= frontier - 1;
      const NodeBits next = succ[u] & ~reached & ~removed;
      reached |= next;
      frontier |= next;
    }
    return reached;
  }

 private:
  const ProbGraph& g_;
  std::vector<NodeBits> fixed_;
  std::vector<Arc> random_;
  NodeBits seeds_ = 0;
};

inline double utility_of(const ProbGraph& g, NodeBits bits) {
  double total = 0.0;
  while (bits) {
    total += g.utility(static_cast<NodeId>(std::countr_zero(bits)));
    bits &= bits - 1;
  }
  return total;
}

// Exact pi for each removal mask, one pass over the realizations.
inline std::vector<ExactResult> exact_pi_many(const ProbGraph& g,
                                              std::span<const NodeBits> removed,
                                              const OracleLimits& limits = {}) {
  RealizationEnumerator en(g, limits);
  std::vector<ExactResult> out(removed.size());
  double mass = 0.0;
  en.for_each([&](double prob, std::span<const NodeBits> succ) {
    mass += prob;
    const NodeBits base = en.reach(succ, 0);
    for (std::size_t i = 0; i < removed.size(); ++i) {
      const NodeBits saved = base & ~en.reach(succ, removed[i]);
      if (saved) out[i].value += prob * utility_of(g, saved);
    }
  });
  for (auto& r : out) {
    r.realizations = en.realizations();
    r.total_probability = mass;
  }
  return out;
}

inline ExactResult exact_pi(const ProbGraph& g, std::span<const NodeId> removed,
                            const OracleLimits& limits = {}) {
  const NodeBits bits = to_bits(removed);
  return exact_pi_many(g, std::span<const NodeBits>(&bits, 1), limits)[0];
}

inline ExactResult exact_sigma(const ProbGraph& g,
                               const OracleLimits& limits = {}) {
  RealizationEnumerator en(g, limits);
  ExactResult out;
  en.for_each([&](double prob, std::span<const NodeBits> succ) {
    out.total_probability += prob;
    out.value += prob * utility_of(g, en.reach(succ, 0));
  });
  out.realizations = en.realizations();
  return out;
}

// Per-node infection probability.
inline std::vector<double> exact_infection_probabilities(
    const ProbGraph& g, const OracleLimits& limits = {}) {
  RealizationEnumerator en(g, limits);
  std::vector<double> out(g.num_nodes(), 0.0);
  en.for_each([&](double prob, std::span<const NodeBits> succ) {
    for (NodeId u : from_bits(en.reach(succ, 0))) out[u] += prob;
  });
  return out;
}

struct OptimumResult {
  std::vector<NodeId> nodes;
  double value = 0.0;
};

// Best removal set of at most k non-seed nodes; ties go to the
// lexicographically smallest node list.
inline OptimumResult exhaustive_opt(const ProbGraph& g, std::size_t k,
                                    const OracleLimits& limits = {}) {
  if (k == 0) return {};
  RealizationEnumerator en(g, limits);  // validates size before subset work
  const auto candidates = g.non_seed_nodes();
  std::vector<NodeBits> subsets;
  std::vector<std::vector<NodeId>> lists;
  // Lexicographic enumeration of all subsets of size 1..k.
  std::vector<std::size_t> pick;
  auto emit = [&] {
    if (subsets.size() >= limits.max_subsets) {
      throw Error(ErrorKind::kSizeCap,
                  "exhaustive search exceeds " +
                      std::to_string(limits.max_subsets) + " subsets");
    }
    std::vector<NodeId> nodes;
    for (std::size_t i : pick) nodes.push_back(candidates[i]);
    subsets.push_back(to_bits(nodes));
    lists.push_back(std::move(nodes));
  };
  auto recurse = [&](auto&& self, std::size_t start) -> void {
    for (std::size_t i = start; i < candidates.size(); ++i) {
      pick.push_back(i);
      emit();
      if (pick.size() < k) self(self, i + 1);
      pick.pop_back();
    }
  };
  recurse(recurse, 0);
  if (subsets.empty()) return {};

  const auto values = exact_pi_many(g, subsets, limits);
  std::size_t best = 0;
  for (std::size_t i = 1; i < subsets.size(); ++i) {
    if (values[i].value > values[best].value ||
        (values[i].value == values[best].value && lists[i] < lists[best])) {
      best = i;
    }
  }
  return {lists[best], values[best].value};
}

// Exact counterpart of MonteCarloObjective for deterministic groups.
class ExactObjective {
 public:
  ExactObjective(const ProbGraph& g, std::span<const Group> groups,
                 OracleLimits limits = {})
      : g_(g), limits_(limits) {
    for (const Group& grp : groups) {
      grp.validate(g.num_nodes());
      if (!std::holds_alternative<DeterministicPolicy>(grp.policy)) {
        throw Error(ErrorKind::kConfig,
                    "exact evaluation needs deterministic groups");
      }
      bits_.emplace_back(grp.id, to_bits(grp.members));
    }
    std::sort(bits_.begin(), bits_.end());
  }

  std::vector<GainEstimate> marginal_gains(const Multiplicities& current,
                                           std::span<const GroupId> candidates,
                                           std::size_t) const {
    const NodeBits base = removed_bits(current);
    std::vector<NodeBits> masks{base};
    for (GroupId id : candidates) masks.push_back(base | group_bits(id));
    const auto values = exact_pi_many(g_, masks, limits_);
    std::vector<GainEstimate> out;
    for (std::size_t j = 1; j < values.size(); ++j) {
      out.push_back({values[j].value - values[0].value, 0.0});
    }
    return out;
  }

  EstimateResult value(const Multiplicities& current, std::size_t) const {
    const NodeBits bits = removed_bits(current);
    return {exact_pi_many(g_, std::span<const NodeBits>(&bits, 1), limits_)[0]
                .value,
            0.0, 0, 0};
  }

 private:
  NodeBits group_bits(GroupId id) const {
    auto it = std::lower_bound(
        bits_.begin(), bits_.end(), id,
        [](const auto& entry, GroupId key) { return entry.first < key; });
    if (it == bits_.end() || it->first != id) {
      throw Error(ErrorKind::kConfig, "unknown group id " + std::to_string(id));
    }
    return it->second;
  }
  NodeBits removed_bits(const Multiplicities& current) const {
    NodeBits bits = 0;
    for (const auto& [id, l] : current) bits |= group_bits(id);
    return bits;
  }

  const ProbGraph& g_;
  OracleLimits limits_;
  std::vector<std::pair<GroupId, NodeBits>> bits_;
};

// Greedy node immunization scored exactly.
inline Selection exact_greedy_nodes(const ProbGraph& g, std::size_t k,
                                    const OracleLimits& limits = {}) {
  const auto groups = singleton_groups(g.non_seed_nodes());
  ExactObjective objective(g, groups, limits);
  return greedy_select(std::span<const Group>(groups), k, objective, false);
}

// Largest IC effective degree among non-seed nodes.
inline double max_effective_degree(const ProbGraph& g) {
  return effective_degree_profile(g).max();
}

struct CriticalSubsetReport {
  // distribution[l] = P(D = 1 and the smallest critical subset has size l).
  std::vector<double> distribution;
  double p_disconnect = 0.0;  // P(D(S* | S_i) = 1)
  double p_two_or_more = 0.0;
  double lambda = 0.0;
  double bound = 0.0;         // (1 - phi(lambda)) * P(D = 1)
  bool applicable = false;    // some realization has D = 1
  bool lemma_holds = true;
};

// For every realization where S* u S_i blocks t from the seeds but S_i does
// not, finds the smallest S' within S* such that S_i u S' blocks t, and
// compares P(|S'| >= 2) with (1 - phi(lambda)) P(D = 1).
inline CriticalSubsetReport critical_subset_check(
    const ProbGraph& g, NodeId target, std::span<const NodeId> s_star,
    std::span<const NodeId> s_i, double lambda,
    const OracleLimits& limits = {}) {
  RealizationEnumerator en(g, limits);
  const NodeBits star = to_bits(s_star);
  const NodeBits current = to_bits(s_i);
  const NodeBits t_bit = NodeBits{1} << target;
  const std::vector<NodeId> star_nodes = from_bits(star);
  const std::size_t width = star_nodes.size();
  std::vector<NodeBits> by_size;  // subsets of S*, ascending cardinality
  for (std::uint64_t m = 0; m < (std::uint64_t{1} << width); ++m) {
    NodeBits bits = 0;
    for (std::size_t i = 0; i < width; ++i) {
      if (m >> i & 1) bits |= NodeBits{1} << star_nodes[i];
    }
    by_size.push_back(bits);
  }
  std::stable_sort(by_size.begin(), by_size.end(), [](NodeBits a, NodeBits b) {
    return std::popcount(a) < std::popcount(b);
  });

  CriticalSubsetReport report;
  report.distribution.assign(width + 1, 0.0);
  report.lambda = lambda;
  auto blocks = [&](std::span<const NodeBits> succ, NodeBits removed) {
    return (removed & t_bit) || !(en.reach(succ, removed) & t_bit);
  };
  en.for_each([&](double prob, std::span<const NodeBits> succ) {
    if (blocks(succ, current) || !blocks(succ, current | star)) return;
    for (NodeBits sub : by_size) {
      if (blocks(succ, current | sub)) {
        report.distribution[std::popcount(sub)] += prob;
        break;
      }
    }
  });
  for (std::size_t l = 0; l <= width; ++l) {
    report.p_disconnect += report.distribution[l];
    if (l >= 2) report.p_two_or_more += report.distribution[l];
  }
  report.applicable = report.p_disconnect > 0.0;
  report.bound = (1.0 - phi(lambda)) * report.p_disconnect;
  report.lemma_holds = report.p_two_or_more <= report.bound + 1e-12;
  return report;
}

inline CriticalSubsetReport critical_subset_check(
    const ProbGraph& g, NodeId target, std::span<const NodeId> s_star,
    std::span<const NodeId> s_i, const OracleLimits& limits = {}) {
  return critical_subset_check(g, target, s_star, s_i,
                               max_effective_degree(g), limits);
}

struct GapCheck {
  double lhs = 0.0;  // (1 - alpha) (f(S* u S) - f(S))
  double rhs = 0.0;  // sum over v in S* of (f(S + v) - f(S)) + beta
  bool holds = false;
};

// Checks the approximate-submodularity inequality for one pair (S*, S).
inline GapCheck submodularity_gap_check(const ProbGraph& g,
                                        std::span<const NodeId> s_star,
                                        std::span<const NodeId> s,
                                        double alpha, double beta,
                                        const OracleLimits& limits = {}) {
  const NodeBits base = to_bits(s);
  std::vector<NodeBits> masks{base, base | to_bits(s_star)};
  for (NodeId v : s_star) masks.push_back(base | NodeBits{1} << v);
  const auto values = exact_pi_many(g, masks, limits);
  GapCheck check;
  check.lhs = alpha >= 1.0
                  ? 0.0
                  : (1.0 - alpha) * (values[1].value - values[0].value);
  check.rhs = beta;
  for (std::size_t i = 2; i < values.size(); ++i) {
    check.rhs += values[i].value - values[0].value;
  }
  check.holds = check.lhs <= check.rhs + 1e-12;
  return check;
}

// ---------------------------------------------------------------------------
// Fixtures witnessing that pi is neither submodular nor supermodular.

// Seed s = 0 feeds nodes 1 and 2, each of which feeds both 3 and 4 (p = 1):
// pi({}) = 0, pi({1}) = pi({2}) = 1, pi({1,2}) = 4.
inline ProbGraph counterexample_a() {
  GraphBuilder b(5);
  b.seed(0).arc(0, 1, 1.0).arc(0, 2, 1.0);
  b.arc(1, 3, 1.0).arc(2, 3, 1.0).arc(1, 4, 1.0).arc(2, 4, 1.0);
  return std::move(b).build();
}

// Path s = 0 -> 1 -> 2 -> {3, ..., 2 + a} (p = 1):
// pi({1}) = 2 + a, pi({2}) = 1 + a, pi({1,2}) = 2 + a.
inline ProbGraph counterexample_b(std::size_t a) {
  GraphBuilder b(3 + a);
  b.seed(0).arc(0, 1, 1.0).arc(1, 2, 1.0);
  for (std::size_t i = 0; i < a; ++i) {
    b.arc(2, static_cast<NodeId>(3 + i), 1.0);
  }
  return std::move(b).build();
}

}  // namespace netimmune

#endif  // NETIMMUNE_ORACLE_HPP_
