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

// Graph transforms that reduce extended immunization settings to group
// immunization on a plain probabilistic graph: time-layered graphs for leaky
// and temporal vaccination, arc splitting for link immunization, household
// cliques, and susceptibility thinning.

#ifndef NETIMMUNE_TRANSFORMS_HPP_
#define NETIMMUNE_TRANSFORMS_HPP_

#include <algorithm>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "netimmune/core.hpp"
#include "netimmune/graph.hpp"
#include "netimmune/groups.hpp"

namespace netimmune {

// ---------------------------------------------------------------------------
// Layered graph.

enum class LayerUtility {
  kFinalLayer,  // only saving u at the last step counts
  kAnyTime,     // u counts as infected if any of its copies is
};

struct LayeredSpec {
  int steps = 1;
  double eps = 0.0;
  LayerUtility utility_mode = LayerUtility::kFinalLayer;
  // Optional per-step override: step_p[t][i] is the probability of base arc
  // i between layer t and t+1.
  std::vector<std::vector<double>> step_p;
};

struct LayeredGraph {
  ProbGraph graph;
  std::vector<Group> groups;  // one per non-seed base node, id = base id
  std::size_t base_nodes = 0;
  int steps = 0;

  NodeId copy(NodeId u, int t) const {
    return static_cast<NodeId>(static_cast<std::size_t>(t) * base_nodes + u);
  }
  // Collector node; only present in kAnyTime mode.
  NodeId collector(NodeId u) const {
    return static_cast<NodeId>(static_cast<std::size_t>(steps + 1) *
                                   base_nodes + u);
  }
};

inline LayeredGraph build_layered(const ProbGraph& g, const LayeredSpec& spec) {
  if (spec.steps < 1) throw Error(ErrorKind::kConfig, "steps must be >= 1");
  if (!(spec.eps >= 0.0 && spec.eps <= 1.0)) {
    throw Error(ErrorKind::kInvalidProbability, "eps must lie in [0,1]");
  }
  if (!spec.step_p.empty() &&
      spec.step_p.size() != static_cast<std::size_t>(spec.steps)) {
    throw Error(ErrorKind::kConfig, "step_p needs one row per step");
  }
  for (const auto& row : spec.step_p) {
    if (row.size() != g.num_arcs()) {
      throw Error(ErrorKind::kConfig, "step_p rows need one entry per arc");
    }
  }

  LayeredGraph out;
  out.base_nodes = g.num_nodes();
  out.steps = spec.steps;
  const std::size_t n = g.num_nodes();
  const auto layers = static_cast<std::size_t>(spec.steps) + 1;
  const bool any_time = spec.utility_mode == LayerUtility::kAnyTime;
  const std::size_t total = layers * n + (any_time ? n : 0);

  GraphBuilder b(total);
  for (NodeId u = 0; u < total; ++u) b.utility(u, 0.0);
  for (int t = 0; t < spec.steps; ++t) {
    for (std::size_t i = 0; i < g.num_arcs(); ++i) {
      const Arc& a = g.arc(i);
      const double p = spec.step_p.empty() ? a.p : spec.step_p[t][i];
      b.arc(out.copy(a.src, t), out.copy(a.dst, t + 1), p, a.structural);
    }
  }
  for (NodeId u = 0; u < n; ++u) {
    if (any_time) {
      b.utility(out.collector(u), g.utility(u));
      for (int t = 0; t <= spec.steps; ++t) {
        b.arc(out.copy(u, t), out.collector(u), 1.0, /*structural=*/true);
      }
    } else {
      b.utility(out.copy(u, spec.steps), g.utility(u));
    }
  }
  for (NodeId s : g.seeds()) b.seed(out.copy(s, 0));
  out.graph = std::move(b).build();

  for (NodeId u = 0; u < n; ++u) {
    if (g.is_seed(u)) continue;
    Group group{u, {}, LeakyChainPolicy{spec.eps}};
    for (int t = 0; t <= spec.steps; ++t) group.members.push_back(out.copy(u, t));
    out.groups.push_back(std::move(group));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Link immunization.

struct LinkSplit {
  ProbGraph graph;
  // Inserted node per base arc; candidates[i] splits base arc i.
  std::vector<NodeId> candidates;
  std::vector<double> arc_p;  // probability of the split arc
};

// Each arc (u,v,p) becomes u->w (p) and w->v (1) with a zero-utility w.
inline LinkSplit split_for_link_immunization(const ProbGraph& g) {
  LinkSplit out;
  if (g.num_arcs() == 0) {
    out.graph = g;
    return out;
  }
  const std::size_t n = g.num_nodes();
  GraphBuilder b(n + g.num_arcs());
  for (NodeId u = 0; u < n; ++u) b.utility(u, g.utility(u));
  for (std::size_t i = 0; i < g.num_arcs(); ++i) {
    const Arc& a = g.arc(i);
    const auto w = static_cast<NodeId>(n + i);
    b.utility(w, 0.0);
    b.arc(a.src, w, a.p, a.structural);
    b.arc(w, a.dst, 1.0, a.structural);
    out.candidates.push_back(w);
    out.arc_p.push_back(a.p);
  }
  for (NodeId s : g.seeds()) b.seed(s);
  out.graph = std::move(b).build();
  return out;
}

// Deterministic link groups over a split graph: one per undirected edge of an
// undirected base graph (both inserted nodes), one per arc otherwise.
inline std::vector<Group> link_groups(const ProbGraph& base,
                                      const LinkSplit& split) {
  std::vector<Group> groups;
  for (std::size_t i = 0; i < base.num_arcs(); ++i) {
    const Arc& a = base.arc(i);
    if (base.directed()) {
      groups.push_back({static_cast<GroupId>(groups.size()),
                        {split.candidates[i]},
                        DeterministicPolicy{}});
    } else if (a.src < a.dst) {
      const std::size_t back = base.find_arc(a.dst, a.src);
      groups.push_back({static_cast<GroupId>(groups.size()),
                        {split.candidates[i], split.candidates[back]},
                        DeterministicPolicy{}});
    }
  }
  return groups;
}

// ---------------------------------------------------------------------------
// Households.

struct HouseholdSpec {
  std::size_t size = 1;   // a
  double strength = 1.0;  // b: within-household weight relative to others
  double r0 = 1.0;        // target mean expected degree after rescaling
  // Shuffle seed for assigning nodes to households; consecutive id blocks
  // when unset.
  std::optional<std::uint64_t> assignment_seed;
};

struct HouseholdGraph {
  ProbGraph graph;
  std::vector<std::vector<NodeId>> households;
};

// Partitions nodes into households of `size` (the last one takes the
// remainder), turns each into a clique whose arcs weigh `strength` times the
// mean base arc probability, then rescales every probability so the mean
// expected degree equals r0.
inline HouseholdGraph build_households(const ProbGraph& g,
                                       const HouseholdSpec& spec) {
  if (spec.size < 1) throw Error(ErrorKind::kConfig, "household size >= 1");
  if (!(spec.strength > 0.0)) {
    throw Error(ErrorKind::kConfig, "household strength must be positive");
  }
  if (!(spec.r0 >= 0.0)) throw Error(ErrorKind::kConfig, "R0 must be >= 0");
  const std::size_t n = g.num_nodes();

  std::vector<NodeId> order(n);
  for (NodeId u = 0; u < n; ++u) order[u] = u;
  if (spec.assignment_seed) {
    Stream rng(derive_seed(*spec.assignment_seed, 0x40e5e));
    for (std::size_t i = n; i > 1; --i) {
      std::swap(order[i - 1], order[rng.below(i)]);
    }
  }
  HouseholdGraph out;
  std::vector<std::size_t> household_of(n);
  for (std::size_t i = 0; i < n; i += spec.size) {
    std::vector<NodeId> members(order.begin() + i,
                                order.begin() + std::min(n, i + spec.size));
    std::sort(members.begin(), members.end());
    for (NodeId u : members) household_of[u] = out.households.size();
    out.households.push_back(std::move(members));
  }

  double base_sum = 0.0;
  std::size_t base_count = 0;
  for (const Arc& a : g.arcs()) {
    if (a.structural) continue;
    base_sum += a.p;
    ++base_count;
  }
  const double base_mean = base_count == 0 ? 1.0 : base_sum / base_count;
  const double strong = spec.strength * base_mean;

  // Relative weights first, then one global scale factor.
  std::vector<Arc> arcs;
  for (const Arc& a : g.arcs()) {
    Arc c = a;
    if (!a.structural && household_of[a.src] == household_of[a.dst]) {
      c.p = strong;
    }
    arcs.push_back(c);
  }
  for (const auto& members : out.households) {
    for (NodeId u : members) {
      for (NodeId v : members) {
        if (u != v && g.find_arc(u, v) == g.num_arcs()) {
          arcs.push_back({u, v, strong, false});
        }
      }
    }
  }
  double weight_sum = 0.0;
  for (const Arc& a : arcs) {
    if (!a.structural) weight_sum += a.p;
  }
  double scale = 0.0;
  if (weight_sum > 0.0) {
    scale = spec.r0 * static_cast<double>(n) / weight_sum;
  } else if (spec.r0 > 0.0) {
    throw Error(ErrorKind::kConfig, "graph has no arcs to rescale to R0 > 0");
  }
  for (Arc& a : arcs) {
    if (a.structural) continue;
    a.p *= scale;
    if (a.p > 1.0) {
      throw Error(ErrorKind::kInvalidProbability,
                  "household rescaling gives arc (" + std::to_string(a.src) +
                      "," + std::to_string(a.dst) + ") probability " +
                      std::to_string(a.p) + " > 1");
    }
  }
  out.graph = ProbGraph(n, std::move(arcs),
                        {g.utilities().begin(), g.utilities().end()},
                        {g.seeds().begin(), g.seeds().end()},
                        g.directedness());
  return out;
}

// One deterministic group per household, id = household index.
inline std::vector<Group> household_groups(const HouseholdGraph& h) {
  std::vector<Group> groups;
  for (std::size_t i = 0; i < h.households.size(); ++i) {
    groups.push_back(
        {static_cast<GroupId>(i), h.households[i], DeterministicPolicy{}});
  }
  return groups;
}

// ---------------------------------------------------------------------------
// Susceptibility thinning.

struct ThinnedGraph {
  ProbGraph graph;
  std::vector<NodeId> original_id;  // new id -> id in the input graph
};

// Keeps node u with probability s[u] (seeds always) and compacts ids, so the
// mean expected degree of the result is the effective reproduction number of
// the input population.
inline ThinnedGraph thin_by_susceptibility(const ProbGraph& g,
                                           std::span<const double> s,
                                           std::uint64_t rng_seed) {
  if (s.size() != g.num_nodes()) {
    throw Error(ErrorKind::kConfig, "need one susceptibility per node");
  }
  for (double x : s) {
    if (!(x >= 0.0 && x <= 1.0)) {
      throw Error(ErrorKind::kInvalidProbability,
                  "susceptibility outside [0,1]");
    }
  }
  Stream rng(derive_seed(rng_seed, 0x7417));
  ThinnedGraph out;
  constexpr NodeId kDropped = ~NodeId{0};
  std::vector<NodeId> new_id(g.num_nodes(), kDropped);
  for (NodeId u = 0; u < g.num_nodes(); ++u) {
    const bool keep = rng.coin(s[u]);
    if (keep || g.is_seed(u)) {
      new_id[u] = static_cast<NodeId>(out.original_id.size());
      out.original_id.push_back(u);
    }
  }
  std::vector<Arc> arcs;
  for (const Arc& a : g.arcs()) {
    if (new_id[a.src] != kDropped && new_id[a.dst] != kDropped) {
      arcs.push_back({new_id[a.src], new_id[a.dst], a.p, a.structural});
    }
  }
  std::vector<double> utility;
  for (NodeId u : out.original_id) utility.push_back(g.utility(u));
  std::vector<NodeId> seeds;
  for (NodeId sd : g.seeds()) seeds.push_back(new_id[sd]);
  out.graph = ProbGraph(out.original_id.size(), std::move(arcs),
                        std::move(utility), std::move(seeds),
                        g.directedness());
  return out;
}

}  // namespace netimmune

#endif  // NETIMMUNE_TRANSFORMS_HPP_
